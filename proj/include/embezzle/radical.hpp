#pragma once

#include "embezzle/factor.hpp"
#include "embezzle/rational.hpp"

#include <map>
#include <string>

namespace embezzle {

// coeff * sqrt(radicand), radicand a squarefree positive integer.
struct Radical {
  Rational coeff = 0;
  Integer radicand = 1;

  static Radical sqrt_of(const Rational& q, const FactorLimits& limits = {});

  Radical inverse() const;
  double to_double() const;
  bool is_zero() const { return coeff == 0; }
  std::string to_string() const;

  friend Radical operator*(const Radical& a, const Radical& b);
  friend bool operator==(const Radical& a, const Radical& b) {
    return a.coeff == b.coeff && (a.coeff == 0 || a.radicand == b.radicand);
  }
};

// Sum of radicals over distinct squarefree radicands. Since square roots of
// distinct squarefree integers are linearly independent over Q, equality of
// the term maps is equality of values.
class RadicalSum {
 public:
  RadicalSum() = default;
  RadicalSum(const Rational& q);  // NOLINT(google-explicit-constructor)
  RadicalSum(const Radical& r);   // NOLINT(google-explicit-constructor)

  const std::map<Integer, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_rational() const;
  Rational rational_part() const;

  RadicalSum& operator+=(const RadicalSum& o);
  RadicalSum& operator-=(const RadicalSum& o);
  RadicalSum& operator*=(const RadicalSum& o);
  friend RadicalSum operator+(RadicalSum a, const RadicalSum& b) { return a += b; }
  friend RadicalSum operator-(RadicalSum a, const RadicalSum& b) { return a -= b; }
  friend RadicalSum operator*(RadicalSum a, const RadicalSum& b) { return a *= b; }
  RadicalSum operator-() const;
  friend bool operator==(const RadicalSum& a, const RadicalSum& b) { return a.terms_ == b.terms_; }

  double to_double() const;
  // "1/2·√2 + 3", or "0".
  std::string to_string() const;

 private:
  void add_term(const Integer& radicand, const Rational& coeff);
  std::map<Integer, Rational> terms_;
};

// Product of two squarefree radicands, split into new radicand and the
// integer pulled out of the root.
std::pair<Integer, Integer> merge_radicands(const Integer& a, const Integer& b);

}  // namespace embezzle
