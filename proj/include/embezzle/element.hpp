#pragma once

#include "embezzle/scalar.hpp"
#include "embezzle/word.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace embezzle::words {

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Product of two Cuntz monomials, or nullopt when it vanishes.
std::optional<Monomial> mul(const Monomial& a, const Monomial& b);

// Finite combination of monomials V_mu V_nu^* in O_d.
class Element {
 public:
  explicit Element(unsigned d) : d_(d) {}
  static Element identity(unsigned d);
  static Element monomial(unsigned d, Word mu, Word nu, const Scalar& c = Scalar(1));

  unsigned d() const { return d_; }
  const std::map<Monomial, Scalar>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t max_right_length() const;

  void add(const Monomial& m, const Scalar& c);
  Element& operator+=(const Element& o);
  Element& operator-=(const Element& o);
  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) { return a -= b; }
  friend Element operator*(const Scalar& s, const Element& a);
  // Term maps equal; see equals() for equality in O_d.
  friend bool operator==(const Element& a, const Element& b) {
    return a.d_ == b.d_ && a.terms_ == b.terms_;
  }

  // "1/2*V[01;-] + V[-;-]"
  std::string to_string() const;

 private:
  void check(unsigned other) const;
  unsigned d_;
  std::map<Monomial, Scalar> terms_;
};

Element mul(const Element& a, const Element& b);
Element adjoint(const Element& a);
Element expand_to_depth(const Element& a, std::size_t K);
bool equals(const Element& a, const Element& b);

Element parse_element(std::string_view text, unsigned d);

// Alice's v_mu v_nu^* tensored with Bob's w_beta w_gamma^*.
struct BiMonomial {
  Monomial alice;
  Monomial bob;
  friend bool operator==(const BiMonomial&, const BiMonomial&) = default;
  friend auto operator<=>(const BiMonomial&, const BiMonomial&) = default;
};

class BiElement {
 public:
  explicit BiElement(unsigned d) : d_(d) {}
  static BiElement simple(unsigned d, Monomial alice, Monomial bob, const Scalar& c = Scalar(1));

  unsigned d() const { return d_; }
  const std::map<BiMonomial, Scalar>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add(const BiMonomial& m, const Scalar& c);
  BiElement& operator+=(const BiElement& o);
  friend bool operator==(const BiElement& a, const BiElement& b) {
    return a.d_ == b.d_ && a.terms_ == b.terms_;
  }

  // "V[0;-](x)W[0;-]"
  std::string to_string() const;

 private:
  unsigned d_;
  std::map<BiMonomial, Scalar> terms_;
};

BiElement parse_bielement(std::string_view text, unsigned d);

std::string monomial_to_string(const Monomial& m, unsigned d, char tag = 'V');

}  // namespace embezzle::words
