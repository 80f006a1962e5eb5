#include "doctest.h"

#include "embezzle/classifier.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <set>

using namespace embezzle;
using namespace embezzle::classify;
namespace cl = embezzle::classify;

namespace {

// Spectrum lambda^{m_i} with lambda = 1/b, grown by splitting one part into b.
std::vector<long> split_exponents(std::mt19937_64& rng, long b, int splits) {
  std::vector<long> m{0};
  for (int s = 0; s < splits; ++s) {
    std::size_t k = rng() % m.size();
    long e = m[k] + 1;
    m.erase(m.begin() + static_cast<long>(k));
    for (long c = 0; c < b; ++c) m.push_back(e);
  }
  return m;
}

bool smooth50(Integer n) {
  for (long p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47})
    while (n % p == 0) n /= p;
  return n == 1;
}

// Exponent vector over the primes up to 50.
std::vector<long> smooth_vector(const Rational& q) {
  std::vector<long> v;
  for (long p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47}) {
    long e = 0;
    Integer a = q.get_num(), b = q.get_den();
    while (a % p == 0) a /= p, ++e;
    while (b % p == 0) b /= p, --e;
    v.push_back(e);
  }
  return v;
}

// x^a == y^b for some small (a, b) != (0, 0), searched exactly.
bool log_ratio_rational(const Rational& x, const Rational& y) {
  for (long a = 1; a <= 12; ++a)
    for (long b = -12; b <= 12; ++b)
      if (b != 0 && pow(x, a) == pow(y, b)) return true;
  return false;
}

}  // namespace

TEST_CASE("PolySpec admissibility") {
  auto p = PolySpec::parse("x^3 + x^2 - 1");
  CHECK(p.d() == 2);
  CHECK(p.exponents() == std::vector<long>{2, 3});
  CHECK(PolySpec::parse("2x-1").exponents() == std::vector<long>{1, 1});
  CHECK(PolySpec::from_exponents({3, 1, 2, 3}) == PolySpec::parse("2x^3+x^2+x-1"));
  CHECK_THROWS_AS(PolySpec::parse("x^2 - x - 1").validate(), InadmissiblePolynomial);
  CHECK_THROWS_AS(PolySpec::parse("x^2 + 1").validate(), InadmissiblePolynomial);
  CHECK_THROWS_AS(PolySpec::parse("x - 1").validate(), InadmissiblePolynomial);
  CHECK_THROWS_AS(PolySpec::parse("-1,1/2,1"), InadmissiblePolynomial);
}

TEST_CASE("unique_root closed forms") {
  auto r = unique_root(PolySpec::parse("2x - 1"));
  CHECK(r.lo == Rational(1, 2));
  CHECK(r.hi == Rational(1, 2));

  r = unique_root(PolySpec::parse("x^2 + x - 1"));
  double golden = (-1 + std::sqrt(5.0)) / 2;  // quadratic formula
  CHECK(std::abs(r.midpoint - golden) < 1e-9);
  CHECK(r.hi - r.lo <= Rational(1) / Rational(Integer("1000000000000")));

  // Newton on x^3 + x^2 - 1 from x = 1
  double x = 1;
  for (int k = 0; k < 50; ++k) x -= (x * x * x + x * x - 1) / (3 * x * x + 2 * x);
  r = unique_root(PolySpec::parse("x^3 + x^2 - 1"));
  CHECK(std::abs(r.midpoint - x) < 1e-9);
  CHECK(std::abs(r.midpoint - 0.7548776662) < 1e-9);
}

TEST_CASE("unique_root bracket properties") {
  std::mt19937_64 rng(8);
  const double tol = 1e-12;
  for (int trial = 0; trial < 100; ++trial) {
    PolySpec p;
    std::size_t deg = 1 + rng() % 8;
    p.coeffs.assign(deg + 1, Integer(0));
    p.coeffs[0] = -1;
    p.coeffs[deg] = 1 + static_cast<long>(rng() % 3);
    for (std::size_t k = 1; k < deg; ++k) p.coeffs[k] = static_cast<long>(rng() % 3);
    if (p.d() < 2) continue;
    auto r = unique_root(p, tol);
    QPoly q = p.to_qpoly();
    CHECK(std::abs(q.eval(r.midpoint)) <= q.derivative().eval(1.0) * tol);
    Rational mid = (r.lo + r.hi) / 2;
    CHECK(sign(q.eval(mid - from_double(tol))) < 0);
    CHECK(sign(q.eval(mid + from_double(tol))) > 0);
  }
}

TEST_CASE("classifier goldens") {
  for (unsigned d = 2; d <= 6; ++d) {
    auto t = cl::classify(SchmidtSpec::uniform(d));
    CHECK_FALSE(t.dense);
    CHECK(t.type_name() == "III_{1/" + std::to_string(d) + "}");
    CHECK(t.certificate.coeffs == std::vector<Integer>{-1, Integer(d)});
    CHECK(t.certificate_verified);
  }
  auto dense = cl::classify(SchmidtSpec::parse("3/4,1/4"));
  CHECK(dense.dense);
  CHECK(dense.type_name() == "III_1");
  CHECK(dense.witness == std::pair<std::size_t, std::size_t>{0, 1});

  auto t = cl::classify(SchmidtSpec::parse("1/2,1/4,1/8,1/8"));
  CHECK(*t.lambda.rational == Rational(1, 2));
  CHECK(t.m == std::vector<long>{1, 2, 3, 3});
  CHECK(t.certificate.to_qpoly().eval(Rational(1, 2)) == 0);

  auto g = cl::classify(SchmidtSpec::parse("m=1,2"));
  CHECK(g.type_name() == "III_λ");
  CHECK(g.certificate == PolySpec::parse("x^2+x-1"));
  CHECK(std::abs(g.lambda.value - (std::sqrt(5.0) - 1) / 2) < 1e-12);
  CHECK(g.certificate_verified);

  // non-primitive exponents describe a coarser group: lambda^2 with m = (1, 2)
  auto c = cl::classify(SchmidtSpec::parse("m=2,4"));
  CHECK(c.m == std::vector<long>{1, 2});
}

TEST_CASE("factorization bound surfaces as an error") {
  Integer p = Integer(1009) * Integer(1013);
  auto spec = SchmidtSpec::from_squares({Rational(1, 2), Rational(p - 2, 2 * p), Rational(1, p)});
  FactorLimits tight{1000};
  CHECK_THROWS_AS(cl::classify(spec, tight), FactorizationError);
}

TEST_CASE("three verdict computations agree on random rational spectra") {
  std::mt19937_64 rng(50);
  int countable = 0, tried = 0;
  while (tried < 200) {
    std::vector<Rational> sq;
    if (rng() % 2) {
      long b = 2 + static_cast<long>(rng() % 2);
      for (long e : split_exponents(rng, b, 1 + static_cast<int>(rng() % 3))) sq.push_back(pow(Rational(1, b), e));
    } else {
      long D = std::vector<long>{12, 24, 30, 36, 48, 60, 72, 90}[rng() % 8];
      std::size_t d = 2 + rng() % 3;
      long rest = D;
      bool ok = true;
      for (std::size_t k = 0; k + 1 < d && ok; ++k) {
        long a = 1 + static_cast<long>(rng() % static_cast<unsigned long>(std::max(1L, rest - 1)));
        if (a >= rest) ok = false;
        sq.push_back(Rational(a, D));
        sq.back().canonicalize();
        rest -= a;
      }
      if (!ok || rest <= 0) continue;
      sq.push_back(Rational(rest, D));
      sq.back().canonicalize();
      bool smooth = true;
      for (auto& q : sq) smooth &= smooth50(q.get_num()) && smooth50(q.get_den());
      if (!smooth) continue;
    }
    ++tried;
    auto spec = SchmidtSpec::from_squares(sq);
    auto t = cl::classify(spec);

    bool parallel = true, rational = true;
    auto& s = spec.squares();
    for (std::size_t i = 0; i < s.size(); ++i)
      for (std::size_t j = i + 1; j < s.size(); ++j) {
        auto vi = smooth_vector(s[i]), vj = smooth_vector(s[j]);
        for (std::size_t x = 0; x < vi.size(); ++x)
          for (std::size_t y = 0; y < vi.size(); ++y)
            if (vi[x] * vj[y] != vi[y] * vj[x]) parallel = false;
        rational &= log_ratio_rational(s[i], s[j]);
      }
    CHECK(parallel == !t.dense);
    CHECK(rational == !t.dense);
    if (!t.dense) {
      ++countable;
      // lambda generates: every alpha_i^2 is an integer power and gcd(m) = 1
      REQUIRE(t.lambda.rational);
      CHECK(*t.lambda.rational < 1);
      for (std::size_t i = 0; i < s.size(); ++i) CHECK(pow(*t.lambda.rational, t.m[i]) == s[i]);
      CHECK(gcd(t.m) == 1);
      CHECK(t.certificate_verified);
    }
  }
  CHECK(countable > 50);
  CHECK(countable < 200);
}

TEST_CASE("round trip through schmidt_from_poly") {
  CHECK(schmidt_from_poly(PolySpec::parse("x + x - 1")).squares() ==
        std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
  auto g = schmidt_from_poly(PolySpec::parse("x + x^2 - 1"));
  CHECK(g.exponents() == std::vector<long>{1, 2});
  auto four = schmidt_from_poly(PolySpec::parse("x + x^2 + x^3 + x^3 - 1"));
  double sum = 0;
  for (std::size_t i = 0; i < 4; ++i) sum += four.alpha_squared(i);
  CHECK(std::abs(sum - 1) < 1e-12);

  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    PolySpec p;
    std::size_t deg = 1 + rng() % 8;
    p.coeffs.assign(deg + 1, Integer(0));
    p.coeffs[0] = -1;
    p.coeffs[deg] = 1;
    std::size_t terms = rng() % 5;
    for (std::size_t k = 0; k < terms; ++k) p.coeffs[1 + rng() % deg] += 1;
    if (p.d() < 2) continue;
    std::vector<long> support;
    for (std::size_t k = 1; k <= deg; ++k)
      if (p.coeffs[k] != 0) support.push_back(static_cast<long>(k));
    long g = gcd(support);
    auto t = cl::classify(schmidt_from_poly(p));
    if (g == 1) {
      CHECK(t.certificate == p);
    } else {
      std::vector<long> reduced;
      for (long e : p.exponents()) reduced.push_back(e / g);
      CHECK(t.certificate == PolySpec::from_exponents(reduced));
    }
  }
}

TEST_CASE("family and excluded lambdas") {
  CHECK(std::abs(family_lambda(2, 2).midpoint - 1 / std::sqrt(2.0)) < 1e-9);
  CHECK(std::abs(family_lambda(1, 2).midpoint - (std::sqrt(5.0) - 1) / 2) < 1e-9);
  std::vector<double> v;
  for (long m = 1; m <= 10; ++m) v.push_back(family_lambda(m, 2).midpoint);
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) CHECK(std::abs(v[i] - v[j]) > 1e-6);
  CHECK(family_poly(3, 3) == PolySpec::parse("x^3 + 2x^2 - 1"));
  CHECK_THROWS(family_lambda(0, 2));

  for (long q : {5, 7, 11, 13}) {
    auto e = excluded_lambda_check(Integer(q));
    CHECK(e.excluded);
    CHECK(e.irreducible);
    for (int k = 0; k < 2; ++k) {
      CHECK(e.roots[k].lo > 0);
      CHECK(e.roots[k].hi < 1);
      CHECK(std::abs(e.roots[k].midpoint - e.closed_form[k]) < 1e-9);
    }
  }
  auto five = excluded_lambda_check(Integer(5));
  CHECK(std::abs(five.roots[0].midpoint - 0.9472) < 1e-4);
  CHECK(std::abs(five.roots[1].midpoint - 0.0528) < 1e-4);
  CHECK_THROWS(excluded_lambda_check(Integer(4)));
  CHECK_THROWS(excluded_lambda_check(Integer(9)));
  CHECK_THROWS(excluded_lambda_check(Integer(3)));
}

TEST_CASE("H group generators") {
  auto h = h_group(SchmidtSpec::uniform(2));
  CHECK_FALSE(h.trivial);
  CHECK(std::abs(h.generator - 2 * std::numbers::pi / std::log(2.0)) < 1e-12);
  CHECK(h_group(SchmidtSpec::parse("3/4,1/4")).trivial);

  for (auto spec : {SchmidtSpec::parse("m=1,2"), SchmidtSpec::parse("1/2,1/4,1/8,1/8"), SchmidtSpec::parse("m=2,3,3"),
                    SchmidtSpec::uniform(3)}) {
    auto hg = h_group(spec);
    REQUIRE_FALSE(hg.trivial);
    long max_m = *std::max_element(hg.m.begin(), hg.m.end());
    for (unsigned j = 0; j < spec.d(); ++j) {
      words::Monomial v{words::Word{j}, words::Word{}};
      auto f = words::sigma_phase(v, spec);
      CHECK(phase_trivial_at(f, hg.m, hg.c));
      CHECK(std::abs(std::remainder(f.theta(spec, hg.generator), 2 * std::numbers::pi)) < 1e-9);
    }
    // no smaller t on the grid of denominators <= max m
    for (long b = 2; b <= std::max(2L, max_m); ++b)
      for (long a = 1; a < b; ++a) {
        Rational q = hg.c * Rational(a, b);
        bool all = true;
        for (unsigned j = 0; j < spec.d(); ++j)
          all &= phase_trivial_at(words::sigma_phase({words::Word{j}, words::Word{}}, spec), hg.m, q);
        CHECK_FALSE(all);
      }
  }
}

TEST_CASE("advisory fits never claim a verdict but find exponent forms") {
  const double lam = (std::sqrt(5.0) - 1) / 2;
  auto fits = advisory_fits({lam, lam * lam});
  REQUIRE_FALSE(fits.empty());
  CHECK(fits[0].m == std::vector<long>{1, 2});
  CHECK(fits[0].max_rel_error < 1e-12);
  auto rough = advisory_fits({0.75, 0.25});
  for (auto& f : rough) CHECK(f.max_rel_error > 1e-6);
  CHECK_THROWS(advisory_fits({1.0}));
}
