#pragma once

#include "embezzle/factor.hpp"
#include "embezzle/poly.hpp"
#include "embezzle/radical.hpp"
#include "embezzle/scalar.hpp"

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace embezzle {

// Q(t) for t = sqrt(lambda), lambda the unique root in (0,1) of
// p(x) = sum_i x^{m_i} - 1. Values are kept as remainders modulo P(t) = p(t^2);
// P has t as its only positive root, which makes zero-testing exact.
struct LambdaField {
  std::vector<long> m;
  QPoly p;
  QPoly P;
  QPoly t_inverse;  // t^{-1} mod P
  Rational t_lo, t_hi;
  double t = 0;

  static std::shared_ptr<const LambdaField> make(std::vector<long> m);
  QPoly power(long k) const;  // t^k mod P
};

class ExactValue {
 public:
  ExactValue() = default;
  ExactValue(RadicalSum r) : rad_(std::move(r)) {}  // NOLINT(google-explicit-constructor)
  ExactValue(std::shared_ptr<const LambdaField> f, QPoly rem);

  bool is_radical() const { return field_ == nullptr; }
  const RadicalSum& radical() const { return rad_; }
  const QPoly& remainder() const { return rem_; }

  bool is_zero() const;
  double to_double() const;
  // "1/2·√2" in rational form, "λ^(1/2) + ..." in exponent form.
  std::string to_string() const;

  ExactValue operator+(const ExactValue& o) const;
  ExactValue operator-(const ExactValue& o) const;
  ExactValue operator*(const ExactValue& o) const;
  friend bool operator==(const ExactValue& a, const ExactValue& b) { return (a - b).is_zero(); }

 private:
  // Both operands over one field; a rational constant joins the other's field.
  std::pair<ExactValue, ExactValue> unify(const ExactValue& o) const;
  RadicalSum rad_;
  std::shared_ptr<const LambdaField> field_;
  QPoly rem_;
};

// Exact Schmidt data, alphas descending. Either every alpha_i^2 is rational,
// or alpha_i = lambda^{m_i/2} with lambda an algebraic root.
class SchmidtSpec {
 public:
  static SchmidtSpec from_squares(std::vector<Rational> squares, const FactorLimits& limits = {});
  // lambda defaults to the unique root of sum x^{m_i} - 1. A rational lambda
  // must satisfy that equation exactly and yields the rational form; a given
  // polynomial must share that root.
  static SchmidtSpec from_exponents(std::vector<long> m, std::optional<Rational> lambda = {},
                                    std::optional<QPoly> lambda_poly = {});
  static SchmidtSpec uniform(unsigned d);

  // "1/2,1/4,1/4", "m=1,2", "lambda=1/2;m=1,1", "lambda-poly=x^2+x-1;m=1,2"
  static SchmidtSpec parse(std::string_view text);

  unsigned d() const { return static_cast<unsigned>(alpha_.size()); }
  bool rational_form() const { return field_ == nullptr; }
  const std::vector<Rational>& squares() const { return squares_; }
  const std::vector<long>& exponents() const;
  const LambdaField& field() const;
  // sorted position k holds input coefficient permutation()[k]
  const std::vector<std::size_t>& permutation() const { return perm_; }

  const std::vector<double>& alpha() const { return alpha_; }
  double alpha_squared(std::size_t i) const { return alpha_[i] * alpha_[i]; }

  ExactValue evaluate(const words::Scalar& s) const;
  ExactValue alpha_value(std::size_t i) const;
  double to_double(const words::Scalar& s) const;
  // Formal comparison first, exact reduction when the forms differ.
  bool equal(const words::Scalar& a, const words::Scalar& b) const;

  std::string describe() const;

 private:
  std::vector<Rational> squares_;
  std::vector<Radical> roots_;
  std::shared_ptr<const LambdaField> field_;
  std::vector<double> alpha_;
  std::vector<std::size_t> perm_;
};

}  // namespace embezzle
