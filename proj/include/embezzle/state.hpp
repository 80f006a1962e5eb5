#pragma once

#include "embezzle/element.hpp"
#include "embezzle/schmidt.hpp"

#include <optional>
#include <string>
#include <vector>

namespace embezzle::words {

// omega(V_mu V_nu^*) = delta_{mu nu} alpha_mu^2, kept symbolic in the alphas.
Scalar omega_formal(const Element& a);
ExactValue omega(const Element& a, const SchmidtSpec& s);

// Three-case evaluation of the bipartite state on v_mu v_nu^* (x) w_beta w_gamma^*.
Scalar s_bipartite_formal(const BiElement& x);
ExactValue s_bipartite(const BiElement& x, const SchmidtSpec& s);

// Moves Bob's factors onto Alice's side: w_beta w_gamma^* becomes
// (alpha_gamma/alpha_beta) times right multiplication by V_gamma V_beta^*.
// Valid only under the state.
Element flip_reduce(const BiElement& x, const SchmidtSpec& s);
Element flip_reduce_formal(const BiElement& x);

// theta(t) = t * sum_i coeff[i] * ln(alpha_i), with coeff = -2 * (count in mu - count in nu).
struct PhaseForm {
  std::vector<long> ln_alpha_coeff;

  double theta(const SchmidtSpec& s, double t) const;
  bool is_identically_zero() const;
  std::string to_string() const;
};

PhaseForm sigma_phase(const Monomial& m, const SchmidtSpec& s);

// (alpha_mu / alpha_nu)^2
Scalar modular_eigenvalue_formal(const Monomial& m, unsigned d);
ExactValue modular_eigenvalue(const Monomial& m, const SchmidtSpec& s);

struct KmsReport {
  bool pass = true;
  std::size_t checked = 0;
  std::size_t exact_fallbacks = 0;
  struct Counterexample {
    Monomial a, x;
    std::string lhs, rhs;
  };
  std::optional<Counterexample> counterexample;
};

// omega(a x) == (alpha_mu^2 / alpha_nu^2) omega(x a) for all monomials
// a = V_mu V_nu^*, x with word lengths <= L.
KmsReport kms_verify(const SchmidtSpec& s, std::size_t L);

// Every monomial with both word lengths <= L.
std::vector<Monomial> monomials_up_to(unsigned d, std::size_t L);

}  // namespace embezzle::words
