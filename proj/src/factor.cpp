#include "embezzle/factor.hpp"

#include <map>

namespace embezzle {

namespace {

// Bases 2..41 decide primality for every n < 3.3e24.
const Integer kMillerRabinLimit("3317044064679887385961981", 10);

bool strong_probable_prime(const Integer& n, unsigned long base) {
  Integer d = n - 1;
  unsigned long s = 0;
  while (mpz_even_p(d.get_mpz_t())) {
    d /= 2;
    ++s;
  }
  Integer a = base, x;
  mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  if (x == 1 || x == n - 1) return true;
  for (unsigned long r = 1; r < s; ++r) {
    mpz_powm_ui(x.get_mpz_t(), x.get_mpz_t(), 2, n.get_mpz_t());
    if (x == n - 1) return true;
  }
  return false;
}

}  // namespace

bool is_prime(const Integer& n) {
  if (n < 2) return false;
  static const unsigned long bases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
  for (unsigned long p : bases) {
    if (n == p) return true;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
  }
  if (n >= kMillerRabinLimit)
    throw FactorizationError("primality of " + n.get_str() +
                             " is outside the deterministic Miller-Rabin range");
  for (unsigned long p : bases)
    if (!strong_probable_prime(n, p)) return false;
  return true;
}

Factorization factor(const Integer& n, const FactorLimits& limits) {
  if (n < 1) throw std::domain_error("factor: argument must be positive");
  Factorization out;
  Integer rest = n;
  auto strip = [&](unsigned long p) {
    long e = 0;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
      mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
      ++e;
    }
    if (e > 0) out.emplace_back(Integer(p), e);
  };
  strip(2);
  std::uint64_t p = 3;
  for (; p <= limits.trial_bound; p += 2) {
    if (Integer(p) * p > rest) break;
    strip(static_cast<unsigned long>(p));
  }
  if (rest == 1) return out;
  bool exhausted = Integer(p) * p > rest;
  if (exhausted || is_prime(rest)) {
    out.emplace_back(rest, 1);
    return out;
  }
  throw FactorizationError("cannot factor " + rest.get_str() + ": composite with no factor below " +
                           std::to_string(limits.trial_bound));
}

Factorization factor(const Rational& q, const FactorLimits& limits) {
  if (q <= 0) throw std::domain_error("factor: rational must be positive");
  std::map<Integer, long> acc;
  for (auto& [p, e] : factor(Integer(q.get_num()), limits)) acc[p] += e;
  for (auto& [p, e] : factor(Integer(q.get_den()), limits)) acc[p] -= e;
  Factorization out;
  for (auto& [p, e] : acc)
    if (e != 0) out.emplace_back(p, e);
  return out;
}

std::pair<Integer, Integer> squarefree_decompose(const Integer& n, const FactorLimits& limits) {
  Integer s = 1, k = 1;
  if (n == 0) return {0, 1};
  for (auto& [p, e] : factor(n, limits)) {
    if (e % 2) s *= p;
    Integer pk;
    mpz_pow_ui(pk.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(e / 2));
    k *= pk;
  }
  return {s, k};
}

}  // namespace embezzle
