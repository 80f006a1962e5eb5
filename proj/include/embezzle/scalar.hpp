#pragma once

#include "embezzle/radical.hpp"
#include "embezzle/word.hpp"

#include <map>
#include <string>
#include <vector>

namespace embezzle::words {

// sqrt(radicand) * prod_i alpha_i^exps[i]; exps has no trailing zeros.
struct ScalarKey {
  Integer radicand = 1;
  std::vector<long> exps;

  friend bool operator<(const ScalarKey& a, const ScalarKey& b) {
    if (a.exps != b.exps) return a.exps < b.exps;
    return a.radicand < b.radicand;
  }
  friend bool operator==(const ScalarKey& a, const ScalarKey& b) {
    return a.exps == b.exps && a.radicand == b.radicand;
  }
};

// Formal Q-linear combination of radical-times-alpha monomials. The alphas
// stay symbolic so that elements do not depend on a particular spectrum;
// a SchmidtSpec turns a Scalar into an exact value.
class Scalar {
 public:
  Scalar() = default;
  Scalar(const Rational& q);      // NOLINT(google-explicit-constructor)
  Scalar(long q) : Scalar(Rational(q)) {}  // NOLINT(google-explicit-constructor)
  Scalar(const RadicalSum& r);    // NOLINT(google-explicit-constructor)

  static Scalar alpha(std::size_t i, long power = 1);
  // alpha_w^power for alpha_w = prod alpha_{w_k}
  static Scalar alpha_word(const Word& w, unsigned d, long power);
  static Scalar monomial(const Rational& c, ScalarKey key);

  const std::map<ScalarKey, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_one() const;

  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  Scalar operator-() const;
  friend bool operator==(const Scalar& a, const Scalar& b) { return a.terms_ == b.terms_; }

  // "1/2·√2·α0^2·α1^-1 + 3"
  std::string to_string() const;

 private:
  void add_term(const ScalarKey& k, const Rational& c);
  std::map<ScalarKey, Rational> terms_;
};

std::string key_to_string(const ScalarKey& key, const Rational& coeff, bool with_sign);

}  // namespace embezzle::words
