#pragma once

#include "embezzle/factor.hpp"
#include "embezzle/poly.hpp"
#include "embezzle/schmidt.hpp"
#include "embezzle/state.hpp"

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace embezzle::classify {

class InadmissiblePolynomial : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Integer polynomial with constant term -1 and nonnegative higher
// coefficients; p(1) = d - 1.
struct PolySpec {
  std::vector<Integer> coeffs;  // ascending

  static PolySpec parse(std::string_view text);
  static PolySpec from_qpoly(const QPoly& p);
  // sum_i x^{m_i} - 1
  static PolySpec from_exponents(const std::vector<long>& m);

  QPoly to_qpoly() const;
  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  unsigned d() const;
  void validate() const;
  // Exponent multiset, ascending; coefficient c_k contributes k c_k times.
  std::vector<long> exponents() const;
  std::string to_string() const { return to_qpoly().to_string(); }
  friend bool operator==(const PolySpec&, const PolySpec&) = default;
};

// Isolating interval [lo, hi] with exact dyadic endpoints; lo == hi when
// bisection lands on the root.
struct RootInterval {
  Rational lo, hi;
  double midpoint = 0;
};

RootInterval unique_root(const PolySpec& p, double tol = 1e-12);

struct Lambda {
  std::optional<Rational> rational;
  PolySpec poly;  // primitive certificate with lambda as its root in (0,1)
  RootInterval interval;
  double value = 0;
};

struct GroupGenerator {
  bool dense = false;
  std::pair<std::size_t, std::size_t> witness{0, 0};
  Lambda lambda;
  std::vector<long> m;  // alpha_i^2 = lambda^{m_i}
};

GroupGenerator group_generator(const SchmidtSpec& s, const FactorLimits& limits = {});

struct TypeReport {
  bool dense = false;
  std::pair<std::size_t, std::size_t> witness{0, 0};
  Lambda lambda;
  std::vector<long> m;
  PolySpec certificate;
  bool certificate_verified = false;

  // "III_1", "III_{1/2}", "III_λ"
  std::string type_name() const;
};

TypeReport classify(const SchmidtSpec& s, const FactorLimits& limits = {});

SchmidtSpec schmidt_from_poly(const PolySpec& p);

// Root in (0,1) of x^m + (d-1) x^2 - 1.
PolySpec family_poly(long m, long d);
RootInterval family_lambda(long m, long d, double tol = 1e-12);

struct ExcludedVerdict {
  Integer q;
  PolySpec poly{};  // 4q x^2 - 4q x + (q - 4); not admissible, so only coeffs are used
  bool irreducible = false;
  std::array<RootInterval, 2> roots{};
  std::array<double, 2> closed_form{};
  bool excluded = false;
};

ExcludedVerdict excluded_lambda_check(const Integer& q);

struct HGroup {
  bool trivial = true;
  Rational c = 0;  // generator = 2 pi c / (-ln lambda)
  double generator = 0;
  Lambda lambda;
  std::vector<long> m;
};

HGroup h_group(const SchmidtSpec& s, const FactorLimits& limits = {});

// Is sigma_t trivial on a monomial with phase form f at t = q * 2 pi / (-ln lambda)?
// Exact in the countable case: theta = -pi q sum_i f_i m_i.
bool phase_trivial_at(const words::PhaseForm& f, const std::vector<long>& m, const Rational& q);

// Nearest exponent-form fits alpha_i^2 ~ lambda^{m_i} for a floating-point
// spectrum. Floats cannot decide rationality of log-ratios, so this never
// produces a type verdict.
struct AdvisoryFit {
  std::vector<long> m;  // primitive
  double lambda = 0;
  double max_rel_error = 0;
};

std::vector<AdvisoryFit> advisory_fits(const std::vector<double>& alpha2, long max_m = 12, std::size_t keep = 3);

}  // namespace embezzle::classify
