#include "embezzle/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace embezzle::classify {

PolySpec PolySpec::parse(std::string_view text) { return from_qpoly(QPoly::parse(text)); }

PolySpec PolySpec::from_qpoly(const QPoly& p) {
  PolySpec out;
  for (auto& c : p.coeffs()) {
    if (c.get_den() != 1) throw InadmissiblePolynomial("coefficient " + c.get_str() + " is not an integer");
    out.coeffs.push_back(c.get_num());
  }
  return out;
}

PolySpec PolySpec::from_exponents(const std::vector<long>& m) {
  PolySpec out;
  out.coeffs.assign(1, Integer(-1));
  for (long k : m) {
    if (k < 1) throw InadmissiblePolynomial("exponents must be positive");
    if (out.coeffs.size() <= static_cast<std::size_t>(k)) out.coeffs.resize(static_cast<std::size_t>(k) + 1, Integer(0));
    out.coeffs[static_cast<std::size_t>(k)] += 1;
  }
  return out;
}

QPoly PolySpec::to_qpoly() const {
  std::vector<Rational> c;
  for (auto& z : coeffs) c.emplace_back(z);
  return QPoly(std::move(c));
}

unsigned PolySpec::d() const {
  Integer s = 0;
  for (auto& c : coeffs) s += c;
  return static_cast<unsigned>(s.get_ui() + 1);
}

void PolySpec::validate() const {
  if (coeffs.size() < 2) throw InadmissiblePolynomial("polynomial must be nonconstant");
  if (coeffs[0] != -1) throw InadmissiblePolynomial("constant term must be -1, got " + coeffs[0].get_str());
  if (coeffs.back() == 0) throw InadmissiblePolynomial("leading coefficient is zero");
  Integer s = 0;
  for (std::size_t k = 1; k < coeffs.size(); ++k) {
    if (coeffs[k] < 0)
      throw InadmissiblePolynomial("coefficient of x^" + std::to_string(k) + " is negative");
    s += coeffs[k];
  }
  // p(1) = s - 1 = d - 1 with d >= 2
  if (s < 2) throw InadmissiblePolynomial("p(1) = " + Integer(s - 1).get_str() + " < 1, so d < 2");
}

std::vector<long> PolySpec::exponents() const {
  std::vector<long> m;
  for (std::size_t k = 1; k < coeffs.size(); ++k)
    for (Integer c = 0; c < coeffs[k]; ++c) m.push_back(static_cast<long>(k));
  return m;
}

RootInterval unique_root(const PolySpec& p, double tol) {
  p.validate();
  if (!(tol > 0)) throw std::invalid_argument("tolerance must be positive");
  QPoly q = p.to_qpoly();
  // Sanity: p must increase strictly along an exact grid on [0,1].
  Rational prev = q.eval(Rational(0));
  for (int k = 1; k <= 64; ++k) {
    Rational x(k, 64);
    x.canonicalize();
    Rational v = q.eval(x);
    if (v <= prev) throw InadmissiblePolynomial("polynomial is not strictly increasing on [0,1]");
    prev = v;
  }
  Rational lo = 0, hi = 1, width = from_double(tol);
  while (hi - lo > width) {
    Rational mid = (lo + hi) / 2;
    int s = sign(q.eval(mid));
    if (s == 0) {
      lo = hi = mid;
      break;
    }
    (s < 0 ? lo : hi) = mid;
  }
  return {lo, hi, Rational((lo + hi) / 2).get_d()};
}

namespace {

std::optional<Rational> rational_root(const PolySpec& p) {
  // A rational root of an integer polynomial with constant -1 is 1/b with b | lead.
  const Integer& lead = p.coeffs.back();
  QPoly q = p.to_qpoly();
  for (Integer b = 1; b <= lead; ++b)
    if (lead % b == 0 && q.eval(Rational(1, b)) == 0 && b > 1) return Rational(1, b);
  return std::nullopt;
}

Lambda make_lambda(const std::vector<long>& m, std::optional<Rational> rational) {
  Lambda l;
  l.poly = PolySpec::from_exponents(m);
  if (!rational) rational = rational_root(l.poly);
  if (rational) {
    l.rational = rational;
    l.interval = {*rational, *rational, rational->get_d()};
    l.value = rational->get_d();
  } else {
    l.interval = unique_root(l.poly);
    l.value = l.interval.midpoint;
  }
  return l;
}

Rational prime_power_value(const std::vector<Integer>& primes, const std::vector<long>& w) {
  Rational v = 1;
  for (std::size_t k = 0; k < primes.size(); ++k) v *= pow(Rational(primes[k]), w[k]);
  return v;
}

}  // namespace

GroupGenerator group_generator(const SchmidtSpec& s, const FactorLimits& limits) {
  GroupGenerator g;
  if (!s.rational_form()) {
    const auto& m = s.exponents();
    long gd = gcd(m);
    for (long k : m) g.m.push_back(k / gd);
    g.lambda = make_lambda(g.m, std::nullopt);
    return g;
  }
  // Exponent vectors of alpha_i^2 over the union of their primes.
  std::map<Integer, std::size_t> index;
  std::vector<Factorization> fs;
  for (auto& q : s.squares()) {
    fs.push_back(factor(q, limits));
    for (auto& [p, e] : fs.back()) index.emplace(p, 0);
  }
  std::vector<Integer> primes;
  for (auto& [p, k] : index) {
    k = primes.size();
    primes.push_back(p);
  }
  std::vector<std::vector<long>> v(fs.size(), std::vector<long>(primes.size(), 0));
  for (std::size_t i = 0; i < fs.size(); ++i)
    for (auto& [p, e] : fs[i]) v[i][index[p]] = e;

  auto parallel = [&](const std::vector<long>& a, const std::vector<long>& b) {
    for (std::size_t x = 0; x < a.size(); ++x)
      for (std::size_t y = x + 1; y < a.size(); ++y)
        if (a[x] * b[y] != a[y] * b[x]) return false;
    return true;
  };
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      if (!parallel(v[i], v[j])) {
        g.dense = true;
        g.witness = {i, j};
        return g;
      }

  // Rank one: v_i = k_i u with u primitive, then lambda = u^{gcd k}.
  long content = gcd(v[0]);
  std::vector<long> u = v[0];
  for (auto& x : u) x /= content;
  std::size_t pivot = 0;
  while (u[pivot] == 0) ++pivot;
  std::vector<long> k;
  for (auto& vi : v) k.push_back(vi[pivot] / u[pivot]);
  long gk = gcd(k);
  if (k[0] < 0) gk = -gk;
  std::vector<long> w = u;
  for (auto& x : w) x *= gk;
  Rational lambda = prime_power_value(primes, w);
  for (long ki : k) g.m.push_back(ki / gk);
  g.lambda = make_lambda(g.m, lambda);
  return g;
}

std::string TypeReport::type_name() const {
  if (dense) return "III_1";
  if (lambda.rational) return "III_{" + lambda.rational->get_str() + "}";
  return "III_λ";
}

TypeReport classify(const SchmidtSpec& s, const FactorLimits& limits) {
  GroupGenerator g = group_generator(s, limits);
  TypeReport r;
  r.dense = g.dense;
  r.witness = g.witness;
  if (g.dense) return r;
  r.lambda = g.lambda;
  r.m = g.m;
  r.certificate = PolySpec::from_exponents(g.m);
  QPoly p = r.certificate.to_qpoly();
  if (r.lambda.rational) {
    r.certificate_verified = p.eval(*r.lambda.rational) == 0;
  } else {
    bool brackets = sign(p.eval(r.lambda.interval.lo)) < 0 && sign(p.eval(r.lambda.interval.hi)) > 0;
    double sum = 0;
    for (long mi : g.m) sum += std::pow(r.lambda.value, static_cast<double>(mi));
    r.certificate_verified = brackets && std::abs(sum - 1) <= 1e-12;
  }
  return r;
}

SchmidtSpec schmidt_from_poly(const PolySpec& p) {
  p.validate();
  return SchmidtSpec::from_exponents(p.exponents());
}

PolySpec family_poly(long m, long d) {
  if (m < 1 || d < 2) throw std::invalid_argument("family needs m >= 1 and d >= 2");
  PolySpec p;
  p.coeffs.assign(static_cast<std::size_t>(std::max(m, 2L)) + 1, Integer(0));
  p.coeffs[0] = -1;
  p.coeffs[static_cast<std::size_t>(m)] += 1;
  p.coeffs[2] += d - 1;
  return p;
}

RootInterval family_lambda(long m, long d, double tol) { return unique_root(family_poly(m, d), tol); }

ExcludedVerdict excluded_lambda_check(const Integer& q) {
  if (q < 5) throw std::invalid_argument("q must be a prime >= 5, got " + q.get_str());
  if (!is_prime(q)) throw std::invalid_argument(q.get_str() + " is not prime");
  ExcludedVerdict v;
  v.q = q;
  v.poly.coeffs = {q - 4, -4 * q, 4 * q};
  Integer disc = 64 * q;
  v.irreducible = mpz_perfect_square_p(disc.get_mpz_t()) == 0;
  QPoly p = v.poly.to_qpoly();
  // signs + at 0, - at 1/2, + at 1 put one root in each half
  auto bisect = [&](Rational lo, Rational hi) {
    int slo = sign(p.eval(lo));
    Rational width = from_double(1e-12);
    while (hi - lo > width) {
      Rational mid = (lo + hi) / 2;
      int s = sign(p.eval(mid));
      if (s == 0) return RootInterval{mid, mid, mid.get_d()};
      (s == slo ? lo : hi) = mid;
    }
    return RootInterval{lo, hi, Rational((lo + hi) / 2).get_d()};
  };
  bool brackets = sign(p.eval(Rational(0))) > 0 && sign(p.eval(Rational(1, 2))) < 0 && sign(p.eval(Rational(1))) > 0;
  v.roots = {bisect(Rational(1, 2), Rational(1)), bisect(Rational(0), Rational(1, 2))};
  double r = 1 / std::sqrt(q.get_d());
  v.closed_form = {0.5 + r, 0.5 - r};
  v.excluded = brackets && v.irreducible;
  return v;
}

HGroup h_group(const SchmidtSpec& s, const FactorLimits& limits) {
  GroupGenerator g = group_generator(s, limits);
  HGroup h;
  if (g.dense) return h;
  h.trivial = false;
  h.lambda = g.lambda;
  h.m = g.m;
  // Each H_{alpha_j} is generated by 2 pi / (m_j L) with L = -ln lambda; their
  // intersection is generated by 2 pi / (gcd(m) L), and m is primitive.
  h.c = Rational(1, gcd(g.m));
  h.generator = 2 * M_PI * h.c.get_d() / -std::log(g.lambda.value);
  return h;
}

bool phase_trivial_at(const words::PhaseForm& f, const std::vector<long>& m, const Rational& q) {
  long s = 0;
  for (std::size_t i = 0; i < f.ln_alpha_coeff.size(); ++i) s += f.ln_alpha_coeff[i] * m.at(i);
  // theta / (2 pi) = -q s / 2
  Rational turns = q * s / 2;
  turns.canonicalize();
  return turns.get_den() == 1;
}

std::vector<AdvisoryFit> advisory_fits(const std::vector<double>& alpha2, long max_m, std::size_t keep) {
  if (alpha2.size() < 2) throw std::invalid_argument("spectrum needs d >= 2");
  for (double a : alpha2)
    if (!(a > 0 && a < 1)) throw std::invalid_argument("squared coefficients must lie in (0,1)");
  const double top = *std::max_element(alpha2.begin(), alpha2.end());
  std::vector<AdvisoryFit> fits;
  for (long m0 = 1; m0 <= max_m; ++m0) {
    const double guess = std::log(top) / static_cast<double>(m0);
    std::vector<long> m;
    for (double a : alpha2) m.push_back(std::max(1L, std::lround(std::log(a) / guess)));
    if (*std::max_element(m.begin(), m.end()) > max_m || gcd(m) != 1) continue;
    if (std::any_of(fits.begin(), fits.end(), [&](const AdvisoryFit& f) { return f.m == m; })) continue;
    AdvisoryFit f;
    f.m = m;
    f.lambda = unique_root(PolySpec::from_exponents(m)).midpoint;
    for (std::size_t i = 0; i < m.size(); ++i)
      f.max_rel_error = std::max(f.max_rel_error,
                                 std::abs(std::pow(f.lambda, static_cast<double>(m[i])) - alpha2[i]) / alpha2[i]);
    fits.push_back(std::move(f));
  }
  std::stable_sort(fits.begin(), fits.end(),
                   [](const AdvisoryFit& a, const AdvisoryFit& b) { return a.max_rel_error < b.max_rel_error; });
  if (fits.size() > keep) fits.resize(keep);
  return fits;
}

}  // namespace embezzle::classify
