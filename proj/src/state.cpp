#include "embezzle/state.hpp"

#include <cmath>

namespace embezzle::words {

namespace {

void check_dim(unsigned got, const SchmidtSpec& s) {
  if (got != s.d())
    throw DimensionMismatch("element over d=" + std::to_string(got) + " but spectrum has d=" +
                            std::to_string(s.d()));
}

bool is_prefix(const std::vector<Letter>& p, const std::vector<Letter>& w, std::size_t w_off = 0) {
  if (p.size() + w_off > w.size()) return false;
  for (std::size_t k = 0; k < p.size(); ++k)
    if (p[k] != w[w_off + k]) return false;
  return true;
}

void add_counts(const std::vector<Letter>& w, long factor, std::vector<long>& out) {
  for (Letter l : w) out[l] += factor;
}

// omega of the product of two monomials as 2*(letter counts), or false for zero.
bool omega_of_product(const Monomial& a, const Monomial& b, std::vector<long>& out) {
  const auto &mu = a.mu.letters(), &nu = a.nu.letters();
  const auto &beta = b.mu.letters(), &gamma = b.nu.letters();
  std::fill(out.begin(), out.end(), 0);
  if (is_prefix(nu, beta)) {
    // V_{mu beta'} V_gamma^*, nonzero iff gamma = mu beta'
    if (gamma.size() != mu.size() + beta.size() - nu.size()) return false;
    if (!is_prefix(mu, gamma)) return false;
    for (std::size_t k = nu.size(), j = mu.size(); k < beta.size(); ++k, ++j)
      if (gamma[j] != beta[k]) return false;
    add_counts(gamma, 2, out);
    return true;
  }
  if (is_prefix(beta, nu)) {
    // V_mu V_{gamma nu'}^*, nonzero iff mu = gamma nu'
    if (mu.size() != gamma.size() + nu.size() - beta.size()) return false;
    if (!is_prefix(gamma, mu)) return false;
    for (std::size_t k = beta.size(), j = gamma.size(); k < nu.size(); ++k, ++j)
      if (mu[j] != nu[k]) return false;
    add_counts(mu, 2, out);
    return true;
  }
  return false;
}

Scalar alpha_power_scalar(const std::vector<long>& exps) { return Scalar::monomial(1, ScalarKey{1, exps}); }

}  // namespace

Scalar omega_formal(const Element& a) {
  Scalar out;
  for (auto& [m, c] : a.terms())
    if (m.mu == m.nu) out += c * Scalar::alpha_word(m.mu, a.d(), 2);
  return out;
}

ExactValue omega(const Element& a, const SchmidtSpec& s) {
  check_dim(a.d(), s);
  return s.evaluate(omega_formal(a));
}

Scalar s_bipartite_formal(const BiElement& x) {
  const unsigned d = x.d();
  Scalar out;
  for (auto& [bm, c] : x.terms()) {
    const Word &mu = bm.alice.mu, &nu = bm.alice.nu, &beta = bm.bob.mu, &gamma = bm.bob.nu;
    if (nu.size() == gamma.size()) {
      if (nu == gamma && mu == beta) out += c * Scalar::alpha_word(gamma, d, 1) * Scalar::alpha_word(beta, d, 1);
    } else if (nu.size() < gamma.size()) {
      Word zeta = gamma.take(nu.size()), xi = gamma.drop(nu.size());
      if (nu == zeta && mu + xi == beta)
        out += c * Scalar::alpha_word(gamma, d, 1) * Scalar::alpha_word(beta, d, 1);
    } else {
      Word zeta = nu.take(gamma.size()), xi = nu.drop(gamma.size());
      if (zeta == gamma && mu == beta + xi)
        out += c * Scalar::alpha_word(gamma, d, 1) * Scalar::alpha_word(beta, d, 1) *
               Scalar::alpha_word(xi, d, 2);
    }
  }
  return out;
}

ExactValue s_bipartite(const BiElement& x, const SchmidtSpec& s) {
  check_dim(x.d(), s);
  return s.evaluate(s_bipartite_formal(x));
}

Element flip_reduce_formal(const BiElement& x) {
  const unsigned d = x.d();
  Element out(d);
  for (auto& [bm, c] : x.terms()) {
    Scalar ratio = Scalar::alpha_word(bm.bob.nu, d, 1) * Scalar::alpha_word(bm.bob.mu, d, -1);
    if (auto m = mul(bm.alice, bm.bob.adjoint())) out.add(*m, c * ratio);
  }
  return out;
}

Element flip_reduce(const BiElement& x, const SchmidtSpec& s) {
  check_dim(x.d(), s);
  return flip_reduce_formal(x);
}

double PhaseForm::theta(const SchmidtSpec& s, double t) const {
  double acc = 0;
  for (std::size_t i = 0; i < ln_alpha_coeff.size(); ++i)
    if (ln_alpha_coeff[i]) acc += static_cast<double>(ln_alpha_coeff[i]) * std::log(s.alpha()[i]);
  return t * acc;
}

bool PhaseForm::is_identically_zero() const {
  for (long c : ln_alpha_coeff)
    if (c) return false;
  return true;
}

std::string PhaseForm::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < ln_alpha_coeff.size(); ++i) {
    long c = ln_alpha_coeff[i];
    if (!c) continue;
    out += out.empty() ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + ");
    long mag = c < 0 ? -c : c;
    if (mag != 1) out += std::to_string(mag) + "·";
    out += "ln α" + std::to_string(i);
  }
  return out.empty() ? "0" : "t·(" + out + ")";
}

PhaseForm sigma_phase(const Monomial& m, const SchmidtSpec& s) {
  PhaseForm f;
  f.ln_alpha_coeff = letter_counts(m.mu, s.d());
  auto nu = letter_counts(m.nu, s.d());
  for (std::size_t i = 0; i < nu.size(); ++i) f.ln_alpha_coeff[i] = -2 * (f.ln_alpha_coeff[i] - nu[i]);
  return f;
}

Scalar modular_eigenvalue_formal(const Monomial& m, unsigned d) {
  return Scalar::alpha_word(m.mu, d, 2) * Scalar::alpha_word(m.nu, d, -2);
}

ExactValue modular_eigenvalue(const Monomial& m, const SchmidtSpec& s) {
  letter_counts(m.mu, s.d());
  letter_counts(m.nu, s.d());
  return s.evaluate(modular_eigenvalue_formal(m, s.d()));
}

std::vector<Monomial> monomials_up_to(unsigned d, std::size_t L) {
  auto words = words_up_to(d, L);
  std::vector<Monomial> out;
  out.reserve(words.size() * words.size());
  for (auto& mu : words)
    for (auto& nu : words) out.push_back({mu, nu});
  return out;
}

KmsReport kms_verify(const SchmidtSpec& s, std::size_t L) {
  if (L < 1) throw std::invalid_argument("kms_verify needs L >= 1");
  const unsigned d = s.d();
  auto monos = monomials_up_to(d, L);
  KmsReport rep;
  std::vector<long> lhs(d), rhs(d), shift(d);
  for (auto& a : monos) {
    std::fill(shift.begin(), shift.end(), 0);
    add_counts(a.mu.letters(), 2, shift);
    add_counts(a.nu.letters(), -2, shift);
    for (auto& x : monos) {
      ++rep.checked;
      bool l = omega_of_product(a, x, lhs);
      bool r = omega_of_product(x, a, rhs);
      if (!l && !r) continue;
      if (l && r) {
        for (unsigned i = 0; i < d; ++i) rhs[i] += shift[i];
        if (lhs == rhs) continue;
        ++rep.exact_fallbacks;
        if (s.equal(alpha_power_scalar(lhs), alpha_power_scalar(rhs))) continue;
      }
      rep.pass = false;
      Scalar ls = l ? alpha_power_scalar(lhs) : Scalar();
      Scalar rs = r ? alpha_power_scalar(rhs) : Scalar();
      rep.counterexample = KmsReport::Counterexample{a, x, s.evaluate(ls).to_string(), s.evaluate(rs).to_string()};
      return rep;
    }
  }
  return rep;
}

}  // namespace embezzle::words
