#include "embezzle/trunc_rep.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

namespace embezzle::trunc {

BuildLimits BuildLimits::from_env() {
  BuildLimits b;
  if (const char* v = std::getenv("EMBEZZLE_MAX_CELLS")) {
    char* end = nullptr;
    double x = std::strtod(v, &end);
    if (end == v || *end != '\0' || !(x > 0)) throw std::invalid_argument(std::string("bad EMBEZZLE_MAX_CELLS: ") + v);
    b.max_cells = x;
  }
  return b;
}

std::size_t truncated_dim(unsigned d, unsigned n) {
  std::size_t N = 0, layer = 1;
  for (unsigned k = 0; k <= n; ++k) {
    N += layer;
    layer *= d;
  }
  return N;
}

TruncatedRep TruncatedRep::build(const SchmidtSpec& s, unsigned n, const BuildLimits& limits) {
  if (n < 1) throw std::invalid_argument("depth n must be >= 1");
  const unsigned d = s.d();
  double N = 0, layer = 1;
  for (unsigned k = 0; k <= n; ++k, layer *= d) N += layer;
  if (N * N > limits.max_cells)
    throw ResourceGuard("doubled dimension " + std::to_string(static_cast<long long>(N * N)) +
                        " at d=" + std::to_string(d) + ", n=" + std::to_string(n) + " exceeds the cap of " +
                        std::to_string(static_cast<long long>(limits.max_cells)) + " (EMBEZZLE_MAX_CELLS)");
  TruncatedRep r;
  r.d_ = d;
  r.n_ = n;
  r.alpha_ = s.alpha();
  r.words_ = words::words_up_to(d, n);
  const std::size_t dim = r.words_.size();

  // Word k of length l has its children d*k + 1 + a in (length, lex) order.
  for (unsigned i = 0; i < d; ++i) {
    std::vector<Eigen::Triplet<double>> trip;
    for (std::size_t k = 0; k < dim; ++k) {
      if (r.words_[k].size() >= n) break;
      trip.emplace_back(static_cast<int>(r.index_of(Word{i} + r.words_[k])), static_cast<int>(k), 1.0);
    }
    SpMat V(static_cast<int>(dim), static_cast<int>(dim));
    V.setFromTriplets(trip.begin(), trip.end());
    r.shift_.push_back(std::move(V));
  }

  r.psi_.resize(static_cast<Eigen::Index>(dim));
  const double norm = 1.0 / std::sqrt(static_cast<double>(n + 1));
  for (std::size_t k = 0; k < dim; ++k) {
    double a = norm;
    for (auto l : r.words_[k].letters()) a *= r.alpha_[l];
    r.psi_[static_cast<Eigen::Index>(k)] = a;
  }
  return r;
}

std::size_t TruncatedRep::index_of(const Word& w) const {
  if (w.size() > n_) throw std::out_of_range("word longer than depth " + std::to_string(n_));
  std::size_t offset = 0, layer = 1;
  for (std::size_t k = 0; k < w.size(); ++k) {
    offset += layer;
    layer *= d_;
  }
  std::size_t value = 0;
  for (auto l : w.letters()) {
    if (l >= d_) throw std::out_of_range("letter out of range");
    value = value * d_ + l;
  }
  return offset + value;
}

SpMat TruncatedRep::word_op(const Monomial& m) const {
  if (m.mu.size() > n_ || m.nu.size() > n_)
    throw std::out_of_range("word too long for depth " + std::to_string(n_));
  const auto N = static_cast<int>(dim());
  SpMat out(N, N);
  out.setIdentity();
  for (auto l : m.mu.letters()) out = out * shift_[l];
  // V_nu^* = (V_nu)^T applied on the right: V_mu V_nu^*
  SpMat vnu(N, N);
  vnu.setIdentity();
  for (auto l : m.nu.letters()) vnu = vnu * shift_[l];
  SpMat res = out * SpMat(vnu.transpose());
  res.prune(0.0);
  return res;
}

SpMat TruncatedRep::level_projection(std::size_t lo, std::size_t hi) const {
  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t k = 0; k < dim(); ++k)
    if (words_[k].size() >= lo && words_[k].size() <= hi) trip.emplace_back(static_cast<int>(k), static_cast<int>(k), 1.0);
  SpMat P(static_cast<int>(dim()), static_cast<int>(dim()));
  P.setFromTriplets(trip.begin(), trip.end());
  return P;
}

SpMat TruncatedRep::psi() const {
  std::vector<Eigen::Triplet<double>> trip;
  for (Eigen::Index k = 0; k < psi_.size(); ++k) trip.emplace_back(static_cast<int>(k), static_cast<int>(k), psi_[k]);
  SpMat P(static_cast<int>(dim()), static_cast<int>(dim()));
  P.setFromTriplets(trip.begin(), trip.end());
  return P;
}

double frobenius_inner(const SpMat& a, const SpMat& b) { return a.cwiseProduct(b).sum(); }

double StructureReport::max() const {
  return std::max({psi_norm_defect, isometry_defect, orthogonality_defect, range_defect, commutator});
}

StructureReport check_structure(const TruncatedRep& r) {
  StructureReport rep;
  const std::size_t n = r.depth();
  rep.psi_norm_defect = std::abs(r.psi_diag().norm() - 1.0);
  SpMat below = r.level_projection(0, n - 1);
  SpMat nonempty = r.level_projection(1, n);
  SpMat range(static_cast<int>(r.dim()), static_cast<int>(r.dim()));
  for (unsigned i = 0; i < r.d(); ++i) {
    const SpMat& Vi = r.shift(i);
    SpMat Vit = Vi.transpose();
    rep.isometry_defect = std::max(rep.isometry_defect, SpMat(Vit * Vi - below).norm());
    for (unsigned j = 0; j < r.d(); ++j)
      if (j != i) rep.orthogonality_defect = std::max(rep.orthogonality_defect, SpMat(Vit * r.shift(j)).norm());
    range += Vi * Vit;
  }
  rep.range_defect = SpMat(range - nonempty).norm();

  // Commutators of every Alice generator with every Bob generator, as
  // explicit Kronecker products when small, otherwise on psi.
  const auto N = static_cast<int>(r.dim());
  SpMat I(N, N);
  I.setIdentity();
  std::vector<SpMat> gens;
  for (unsigned i = 0; i < r.d(); ++i) {
    gens.push_back(r.shift(i));
    gens.push_back(SpMat(r.shift(i).transpose()));
  }
  const bool explicit_kron = static_cast<double>(N) * N <= 2e4;
  auto kron = [&](const SpMat& a, const SpMat& b) {
    std::vector<Eigen::Triplet<double>> trip;
    for (int ca = 0; ca < a.outerSize(); ++ca)
      for (SpMat::InnerIterator ia(a, ca); ia; ++ia)
        for (int cb = 0; cb < b.outerSize(); ++cb)
          for (SpMat::InnerIterator ib(b, cb); ib; ++ib)
            trip.emplace_back(static_cast<int>(ia.row() * N + ib.row()), static_cast<int>(ia.col() * N + ib.col()),
                              ia.value() * ib.value());
    SpMat K(N * N, N * N);
    K.setFromTriplets(trip.begin(), trip.end());
    return K;
  };
  SpMat X = r.psi();
  for (auto& A : gens)
    for (auto& B : gens) {
      double c;
      if (explicit_kron) {
        SpMat AI = kron(A, I), IB = kron(I, B);
        c = SpMat(AI * IB - IB * AI).norm();
      } else {
        c = SpMat(r.alice(A, r.bob(B, X)) - r.bob(B, r.alice(A, X))).norm();
      }
      rep.commutator = std::max(rep.commutator, c);
    }
  return rep;
}

double rep_state(const TruncatedRep& r, const Monomial& m) {
  SpMat psi = r.psi();
  return frobenius_inner(r.alice(r.word_op(m), psi), psi);
}

ResidualReport embezzle_residual(const TruncatedRep& r) {
  const unsigned d = r.d();
  ResidualReport rep;
  rep.n = r.depth();
  rep.inner.setZero(d, d);
  rep.vector.setZero(d, d);
  SpMat psi = r.psi();
  double sq = 0;
  for (unsigned i = 0; i < d; ++i) {
    SpMat Ri0 = r.shift(i).transpose();
    SpMat Rpsi = r.alice(Ri0, psi);
    for (unsigned j = 0; j < d; ++j) {
      SpMat Tj0 = r.shift(j).transpose();
      SpMat X = r.bob(Tj0, Rpsi);
      double target = i == j ? r.alpha()[i] : 0.0;
      rep.inner(i, j) = frobenius_inner(X, psi) - target;
      double v = SpMat(X - target * psi).norm();
      rep.vector(i, j) = v;
      sq += v * v;
    }
  }
  rep.full = std::sqrt(sq);
  return rep;
}

std::vector<SweepRow> convergence_sweep(const SchmidtSpec& s, std::vector<Monomial> monomials, unsigned n_lo,
                                        unsigned n_hi, const BuildLimits& limits) {
  if (n_lo < 1 || n_lo > n_hi) throw std::invalid_argument("bad depth range");
  std::sort(monomials.begin(), monomials.end());
  for (auto& m : monomials)
    if (m.mu.size() > n_lo || m.nu.size() > n_lo)
      throw std::invalid_argument("monomial word longer than the smallest depth");
  std::vector<double> exact;
  for (auto& m : monomials) {
    double v = 0;
    if (m.mu == m.nu) {
      v = 1;
      for (auto l : m.mu.letters()) v *= s.alpha_squared(l);
    }
    exact.push_back(v);
  }
  std::vector<SweepRow> rows;
  for (unsigned n = n_lo; n <= n_hi; ++n) {
    TruncatedRep r = TruncatedRep::build(s, n, limits);
    for (std::size_t k = 0; k < monomials.size(); ++k) {
      SweepRow row;
      row.n = n;
      row.m = monomials[k];
      row.rep_value = rep_state(r, monomials[k]);
      row.exact_value = exact[k];
      row.abs_diff = std::abs(row.rep_value - row.exact_value);
      row.bound = static_cast<double>(std::max(monomials[k].mu.size(), monomials[k].nu.size())) / (n + 1);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

ConjugationReport modular_conjugation_check(const TruncatedRep& r, unsigned L) {
  if (L > r.depth()) throw std::invalid_argument("L must not exceed the depth");
  ConjugationReport rep;
  rep.n = r.depth();
  rep.L = L;
  SpMat psi = r.psi();
  auto alpha_word = [&](const Word& w) {
    double a = 1;
    for (auto l : w.letters()) a *= r.alpha()[l];
    return a;
  };
  for (auto& mu : words::words_up_to(r.d(), L))
    for (auto& nu : words::words_up_to(r.d(), L)) {
      Monomial m{mu, nu};
      SpMat lhs = r.alice(r.word_op(m), psi);
      SpMat rhs = r.bob(r.word_op(m.adjoint()), psi);
      double defect = SpMat(lhs - (alpha_word(nu) / alpha_word(mu)) * rhs).norm();
      rep.max_defect = std::max(rep.max_defect, defect);
      rep.entries.push_back({m, defect});
    }
  return rep;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("slope needs two or more points");
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += std::log(x[k]);
    my += std::log(y[k]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0, sxx = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    double dx = std::log(x[k]) - mx;
    sxy += dx * (std::log(y[k]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace embezzle::trunc
