#pragma once

#include "embezzle/rational.hpp"

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace embezzle {

// Dense univariate polynomial over Q, coefficients in ascending degree.
class QPoly {
 public:
  QPoly() = default;
  explicit QPoly(std::vector<Rational> ascending);
  static QPoly monomial(const Rational& c, std::size_t k);

  // "x^3 + x^2 - 1", "2x-1", "3*x^2 + x + x - 1", or an ascending
  // coefficient list "-1,1,1".
  static QPoly parse(std::string_view text);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Rational>& coeffs() const { return c_; }
  Rational coeff(std::size_t k) const { return k < c_.size() ? c_[k] : Rational(0); }
  const Rational& lead() const { return c_.back(); }

  Rational eval(const Rational& x) const;
  double eval(double x) const;
  QPoly derivative() const;
  QPoly monic() const;
  // p(x^2)
  QPoly substitute_square() const;

  QPoly& operator+=(const QPoly& o);
  QPoly& operator-=(const QPoly& o);
  friend QPoly operator+(QPoly a, const QPoly& b) { return a += b; }
  friend QPoly operator-(QPoly a, const QPoly& b) { return a -= b; }
  friend QPoly operator*(const QPoly& a, const QPoly& b);
  friend QPoly operator*(QPoly a, const Rational& s);
  QPoly operator-() const;
  friend bool operator==(const QPoly& a, const QPoly& b) { return a.c_ == b.c_; }

  // Euclidean division; divisor nonzero.
  std::pair<QPoly, QPoly> divmod(const QPoly& divisor) const;
  friend QPoly operator%(const QPoly& a, const QPoly& b) { return a.divmod(b).second; }

  // "x^2 + x - 1"
  std::string to_string(std::string_view var = "x") const;

 private:
  void trim();
  std::vector<Rational> c_;
};

// Monic gcd; gcd(0, 0) = 0.
QPoly gcd(QPoly a, QPoly b);

int sign(const Rational& q);

std::vector<QPoly> sturm_sequence(const QPoly& p);

// Number of distinct real roots in (a, b]; p nonzero.
int count_roots(const QPoly& p, const Rational& a, const Rational& b);

}  // namespace embezzle
