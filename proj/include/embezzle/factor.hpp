#pragma once

#include "embezzle/rational.hpp"

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace embezzle {

struct FactorLimits {
  std::uint64_t trial_bound = 1'000'000;
};

class FactorizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Prime-power factorization of a positive integer, primes ascending.
using Factorization = std::vector<std::pair<Integer, long>>;

// Deterministic Miller-Rabin; throws FactorizationError above the range
// where the fixed base set is a proof.
bool is_prime(const Integer& n);

// Trial division up to limits.trial_bound, then a primality test on the
// cofactor. A composite cofactor with no small factor is an error.
Factorization factor(const Integer& n, const FactorLimits& limits = {});

// Signed exponents of a positive rational: numerator primes positive.
Factorization factor(const Rational& q, const FactorLimits& limits = {});

// n = s * k^2 with s squarefree; returns {s, k}.
std::pair<Integer, Integer> squarefree_decompose(const Integer& n,
                                                 const FactorLimits& limits = {});

}  // namespace embezzle
