#include "embezzle/protocol.hpp"

#include "embezzle/state.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace embezzle::protocol {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

VectorXd flatten(const SpMat& X) {
  const Eigen::Index N = X.rows();
  VectorXd v = VectorXd::Zero(N * X.cols());
  for (int c = 0; c < X.outerSize(); ++c)
    for (SpMat::InnerIterator it(X, c); it; ++it) v[it.row() * X.cols() + it.col()] = it.value();
  return v;
}

SpMat unflatten(const VectorXd& v, Eigen::Index N) {
  std::vector<Eigen::Triplet<double>> trip;
  for (Eigen::Index k = 0; k < v.size(); ++k)
    if (v[k] != 0.0) trip.emplace_back(static_cast<int>(k / N), static_cast<int>(k % N), v[k]);
  SpMat X(static_cast<int>(N), static_cast<int>(N));
  X.setFromTriplets(trip.begin(), trip.end());
  return X;
}

SpMat zero(std::size_t N) { return SpMat(static_cast<int>(N), static_cast<int>(N)); }

// Sparse A (x) B with index a*N + b on the doubled space.
SpMat kron(const SpMat& A, const SpMat& B) {
  std::vector<Eigen::Triplet<double>> trip;
  const auto N = B.rows();
  for (int ca = 0; ca < A.outerSize(); ++ca)
    for (SpMat::InnerIterator ia(A, ca); ia; ++ia)
      for (int cb = 0; cb < B.outerSize(); ++cb)
        for (SpMat::InnerIterator ib(B, cb); ib; ++ib)
          trip.emplace_back(static_cast<int>(ia.row() * N + ib.row()), static_cast<int>(ia.col() * N + ib.col()),
                            ia.value() * ib.value());
  SpMat K(static_cast<int>(A.rows() * N), static_cast<int>(A.cols() * B.cols()));
  K.setFromTriplets(trip.begin(), trip.end());
  return K;
}

SpMat identity(std::size_t N) {
  SpMat I(static_cast<int>(N), static_cast<int>(N));
  I.setIdentity();
  return I;
}

double lambda_max_sym(const MatrixXd& S) {
  double gersh = 0;
  for (Eigen::Index r = 0; r < S.rows(); ++r) gersh = std::max(gersh, S.row(r).cwiseAbs().sum());
  if (gersh <= 1.0) return gersh;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(S, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

}  // namespace

SchmidtNormalization schmidt_normalize(const MatrixXd& phi) {
  if (phi.rows() != phi.cols() || phi.rows() < 2) throw std::invalid_argument("phi must be a square d x d matrix, d >= 2");
  double fn = phi.norm();
  if (std::abs(fn - 1.0) > 1e-10)
    throw std::invalid_argument("phi has Frobenius norm " + std::to_string(fn) + ", expected 1");
  Eigen::JacobiSVD<MatrixXd> svd(phi, Eigen::ComputeFullU | Eigen::ComputeFullV);
  SchmidtNormalization sn;
  sn.alpha = svd.singularValues();
  if (sn.alpha.minCoeff() < 1e-12) throw std::invalid_argument("phi is Schmidt-rank deficient");
  MatrixXd U = svd.matrixU(), V = svd.matrixV();
  // Singular vectors are only fixed up to a rotation R of each cluster of
  // equal singular values (U -> U R, V -> V R). Pick R so the cluster of U
  // lines up with the standard basis vectors it overlaps most.
  const Eigen::Index d = phi.rows();
  for (Eigen::Index b = 0; b < d;) {
    Eigen::Index e = b + 1;
    while (e < d && sn.alpha[b] - sn.alpha[e] <= 1e-12) ++e;
    const Eigen::Index k = e - b;
    std::vector<Eigen::Index> rows(static_cast<std::size_t>(d));
    std::iota(rows.begin(), rows.end(), 0);
    std::stable_sort(rows.begin(), rows.end(), [&](Eigen::Index x, Eigen::Index y) {
      return U.block(x, b, 1, k).norm() > U.block(y, b, 1, k).norm() + 1e-12;
    });
    std::sort(rows.begin(), rows.begin() + k);
    MatrixXd A(k, k);  // U_b^T S with S the chosen standard basis columns
    for (Eigen::Index j = 0; j < k; ++j) A.col(j) = U.block(rows[static_cast<std::size_t>(j)], b, 1, k).transpose();
    Eigen::JacobiSVD<MatrixXd> pol(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
    MatrixXd R = pol.matrixU() * pol.matrixV().transpose();
    U.middleCols(b, k) = U.middleCols(b, k) * R;
    V.middleCols(b, k) = V.middleCols(b, k) * R;
    b = e;
  }
  // Columns of U are f_i, columns of V are g_i; U_f maps f_i to e_i.
  sn.U_f = U.transpose();
  sn.U_g = V.transpose();
  sn.residual = (U * sn.alpha.asDiagonal() * V.transpose() - phi).norm();
  return sn;
}

SpMat BobOp::apply(const SpMat& X) const {
  if (full) return unflatten(dense * flatten(X), X.rows());
  return SpMat(X * SpMat(leg.transpose()));
}

bool BobOp::is_zero() const { return full ? dense.isZero(0.0) : leg.nonZeros() == 0; }

ProtocolInstance zero_instance(std::shared_ptr<const TruncatedRep> rep) {
  ProtocolInstance p;
  p.d = rep->d();
  const std::size_t N = rep->dim();
  p.R.assign(p.d * p.d, zero(N));
  p.T.assign(p.d * p.d, BobOp{false, zero(N), {}});
  p.F = MatrixXd::Identity(p.d, p.d);
  p.G = MatrixXd::Identity(p.d, p.d);
  p.phi = MatrixXd::Zero(p.d, p.d);
  for (unsigned i = 0; i < p.d; ++i) p.phi(i, i) = rep->alpha()[i];
  p.rep = std::move(rep);
  return p;
}

ProtocolInstance canonical_instance(std::shared_ptr<const TruncatedRep> rep) {
  ProtocolInstance p = zero_instance(rep);
  for (unsigned i = 0; i < p.d; ++i) {
    p.R[i * p.d] = rep->shift(i).transpose();
    p.T[i * p.d].leg = rep->shift(i).transpose();
  }
  return p;
}

ProtocolInstance conjugate(const ProtocolInstance& c, const SchmidtNormalization& sn) {
  const unsigned d = c.d;
  if (sn.U_f.rows() != d) throw std::invalid_argument("normalization has the wrong dimension");
  ProtocolInstance p = c;
  p.F = sn.U_f.transpose();
  p.G = sn.U_g.transpose();
  p.phi = p.F * c.phi * p.G.transpose();
  const std::size_t N = c.rep->dim();
  bool any_full = false;
  for (auto& t : c.T) any_full |= t.full;
  for (unsigned i = 0; i < d; ++i)
    for (unsigned k = 0; k < d; ++k) {
      // R'_ik = sum_pq F_ip R_pq F_kq, likewise T with G
      SpMat r = zero(N);
      BobOp t{any_full, zero(N), any_full ? MatrixXd::Zero(static_cast<Eigen::Index>(N * N), static_cast<Eigen::Index>(N * N)) : MatrixXd()};
      for (unsigned a = 0; a < d; ++a)
        for (unsigned b = 0; b < d; ++b) {
          double wr = p.F(i, a) * p.F(k, b), wt = p.G(i, a) * p.G(k, b);
          if (c.r(a, b).nonZeros()) r += wr * c.r(a, b);
          const BobOp& src = c.t(a, b);
          if (src.is_zero()) continue;
          if (any_full)
            t.dense += wt * (src.full ? src.dense : MatrixXd(kron(identity(N), src.leg)));
          else
            t.leg += wt * src.leg;
        }
      p.R[i * d + k] = r;
      p.T[i * d + k] = std::move(t);
    }
  return p;
}

ConditionReport bipartite_check(const ProtocolInstance& p) {
  const unsigned d = p.d;
  const auto& rep = *p.rep;
  const std::size_t N = rep.dim();
  SpMat psi = rep.psi();
  VectorXd f0 = p.F.col(0), g0 = p.G.col(0);

  std::vector<SpMat> S(d, zero(N));  // S_q = sum_l g0_l T_ql psi
  for (unsigned q = 0; q < d; ++q)
    for (unsigned l = 0; l < d; ++l)
      if (g0[l] != 0.0 && !p.t(q, l).is_zero()) S[q] += g0[l] * p.t(q, l).apply(psi);
  std::vector<SpMat> Y(d * d, zero(N));
  for (unsigned pp = 0; pp < d; ++pp)
    for (unsigned q = 0; q < d; ++q)
      for (unsigned k = 0; k < d; ++k)
        if (f0[k] != 0.0 && p.r(pp, k).nonZeros()) Y[pp * d + q] += f0[k] * SpMat(p.r(pp, k) * S[q]);

  MatrixXd target = p.F.transpose() * p.phi * p.G;
  ConditionReport rep_out;
  rep_out.n = rep.depth();
  rep_out.inner.setZero(d, d);
  rep_out.vector.setZero(d, d);
  double sq = 0;
  for (unsigned i = 0; i < d; ++i)
    for (unsigned j = 0; j < d; ++j) {
      SpMat Z = zero(N);
      for (unsigned pp = 0; pp < d; ++pp)
        for (unsigned q = 0; q < d; ++q) {
          double w = p.F(pp, i) * p.G(q, j);
          if (w != 0.0) Z += w * Y[pp * d + q];
        }
      rep_out.inner(i, j) = trunc::frobenius_inner(Z, psi) - target(i, j);
      double v = SpMat(Z - target(i, j) * psi).norm();
      rep_out.vector(i, j) = v;
      sq += v * v;
    }
  rep_out.full = std::sqrt(sq);
  rep_out.max_abs = rep_out.inner.cwiseAbs().maxCoeff();
  // The full residual is computed from the same components, so cross-check
  // it against the directly assembled vector as well.
  double direct = 0;
  for (unsigned pp = 0; pp < d; ++pp)
    for (unsigned q = 0; q < d; ++q) direct += SpMat(Y[pp * d + q] - p.phi(pp, q) * psi).squaredNorm();
  direct = std::sqrt(direct);
  bool ok = std::abs(direct - rep_out.full) <= 1e-10 * std::max(1.0, direct);
  for (unsigned i = 0; i < d; ++i)
    for (unsigned j = 0; j < d; ++j) ok &= std::abs(rep_out.inner(i, j)) <= rep_out.vector(i, j) + 1e-12;
  ok &= rep_out.max_abs <= rep_out.full + 1e-12;
  rep_out.consistent = ok;
  return rep_out;
}

BobBuild build_bob(std::shared_ptr<const TruncatedRep> rep_ptr, const BobOptions& opt) {
  const TruncatedRep& rep = *rep_ptr;
  const unsigned d = rep.d(), n = rep.depth();
  const unsigned L = opt.span_len ? opt.span_len : n;
  if (L > n) throw std::invalid_argument("span length exceeds depth");
  const std::size_t N = rep.dim(), D = N * N;
  if (D > opt.max_doubled_dim)
    throw trunc::ResourceGuard("build_bob needs dense operators on the doubled space; dimension " + std::to_string(D) +
                               " exceeds " + std::to_string(opt.max_doubled_dim));
  const auto Di = static_cast<Eigen::Index>(D);
  SpMat psi = rep.psi();
  auto words = words::words_up_to(d, L);
  const auto K = static_cast<Eigen::Index>(words.size() * words.size());

  MatrixXd B(Di, K);
  std::vector<MatrixXd> M(d, MatrixXd(Di, K));
  Eigen::Index col = 0;
  for (auto& mu : words)
    for (auto& nu : words) {
      SpMat X = rep.word_op({mu, nu});
      B.col(col) = flatten(SpMat(X * psi));
      for (unsigned i = 0; i < d; ++i)
        M[i].col(col) = flatten(SpMat(X * SpMat(rep.shift(i).transpose()) * psi)) / rep.alpha()[i];
      ++col;
    }

  Eigen::ColPivHouseholderQR<MatrixXd> qr(B);
  BobBuild out;
  out.span_len = L;
  out.span_dim = static_cast<std::size_t>(qr.rank());
  const MatrixXd& QR = qr.matrixQR();
  out.condition = std::abs(QR(0, 0)) / std::abs(QR(K - 1, K - 1));
  if (qr.rank() < K || !(out.condition <= opt.max_condition))
    throw std::runtime_error("span basis is ill-conditioned (condition estimate " + std::to_string(out.condition) +
                             ", rank " + std::to_string(qr.rank()) + " of " + std::to_string(K) + ")");
  MatrixXd Q1 = qr.householderQ() * MatrixXd::Identity(Di, K);
  MatrixXd Rk = qr.matrixR().topLeftCorner(K, K);
  auto Rt = Rk.triangularView<Eigen::Upper>();

  std::vector<MatrixXd> W(d);
  for (unsigned i = 0; i < d; ++i) {
    MatrixXd Mp = M[i] * qr.colsPermutation();
    // W_i = M_i P R^{-1} Q1^T, zero off the span
    MatrixXd X = Rt.transpose().solve(Mp.transpose()).transpose();
    W[i] = X * Q1.transpose();
  }

  ProtocolInstance inst = zero_instance(rep_ptr);
  for (unsigned i = 0; i < d; ++i) {
    inst.R[i * d] = rep.shift(i).transpose();
    inst.T[i * d] = BobOp{true, zero(N), W[i].transpose()};
  }

  const bool full_span = K == Di;
  auto on_span = [&](const MatrixXd& A) { return full_span ? A.norm() : (A * Q1).norm(); };
  SpMat I = identity(N);
  for (unsigned i = 0; i < d; ++i) {
    MatrixXd canon = MatrixXd(kron(I, rep.shift(i)));
    out.shift_match = std::max(out.shift_match, on_span(W[i] - canon));
    SpMat Tpsi = inst.T[i * d].apply(psi);
    SpMat target = rep.alpha()[i] * SpMat(rep.shift(i) * psi);
    out.t_on_psi_match = std::max(out.t_on_psi_match, SpMat(Tpsi - target).norm());
  }

  // Alice generators act on the first tensor leg. Off the full span only
  // pairs (x, A) with A x back in the span are meaningful; V_k^* V_k is a
  // projection in the truncation, so A x can leave the span.
  for (unsigned k = 0; k < d; ++k) {
    SpMat Ak = kron(rep.shift(k), I);
    SpMat Akt = kron(SpMat(rep.shift(k).transpose()), I);
    for (const SpMat* A : {&Ak, &Akt}) {
      MatrixXd Y, stays;
      if (!full_span) {
        Y = (*A) * B;
        MatrixXd off = Y - Q1 * (Q1.transpose() * Y);
        stays = off.colwise().norm();
      }
      for (unsigned i = 0; i < d; ++i) {
        if (full_span) {
          MatrixXd C = W[i] * (*A) - (*A) * W[i];
          out.commutation_defect = std::max(out.commutation_defect, C.norm());
          continue;
        }
        MatrixXd C = W[i] * Y - (*A) * (W[i] * B);
        for (Eigen::Index c = 0; c < K; ++c)
          if (stays(0, c) <= 1e-10 * std::max(1.0, Y.col(c).norm()))
            out.commutation_defect = std::max(out.commutation_defect, C.col(c).norm() / B.col(c).norm());
      }
    }
  }

  MatrixXd S = MatrixXd::Zero(Di, Di);
  for (unsigned j = 0; j < d; ++j) S.noalias() += W[j] * W[j].transpose();
  out.contraction_defect = std::max(0.0, std::sqrt(lambda_max_sym(S)) - 1.0);
  out.full_span = full_span;
  out.projection_defect = full_span ? (S * S - S).norm() : std::numeric_limits<double>::quiet_NaN();

  out.inner_residual_max = bipartite_check(inst).max_abs;
  out.instance = std::move(inst);
  return out;
}

HalmosResult halmos_unitary(const TruncatedRep& rep) {
  const unsigned d = rep.d(), n = rep.depth();
  if (n < 2) throw std::invalid_argument("halmos_unitary needs n >= 2");
  const std::size_t N = rep.dim();
  HalmosResult h;
  h.d = d;
  h.n = n;
  h.prepend_halving = d == 2;
  if (h.prepend_halving) {
    h.G0 = rep.shift(0);
    h.G1 = rep.shift(1);
  } else {
    std::vector<Eigen::Triplet<double>> t0, t1;
    for (std::size_t k = 0; 2 * k < N; ++k) {
      t0.emplace_back(static_cast<int>(2 * k), static_cast<int>(k), 1.0);
      if (2 * k + 1 < N) t1.emplace_back(static_cast<int>(2 * k + 1), static_cast<int>(k), 1.0);
    }
    h.G0 = zero(N);
    h.G1 = zero(N);
    h.G0.setFromTriplets(t0.begin(), t0.end());
    h.G1.setFromTriplets(t1.begin(), t1.end());
  }
  SpMat G0t = h.G0.transpose(), G1t = h.G1.transpose();
  SpMat G1G0t = h.G1 * G0t;
  h.U.assign(d * d, zero(N));
  for (unsigned i = 0; i < d; ++i)
    for (unsigned j = 0; j < d; ++j) {
      SpMat u = zero(N);
      if (j == 0) u += h.G0 * SpMat(rep.shift(i).transpose()) * G0t;
      if (i != 0 && i == j) u += G1G0t;
      if (i == 0) u -= h.G1 * rep.shift(j) * G1t;
      u.prune(0.0);
      h.U[i * d + j] = u;
    }

  // Assemble the dN x dN matrix and measure defects on chosen columns.
  std::vector<Eigen::Triplet<double>> trip;
  for (unsigned i = 0; i < d; ++i)
    for (unsigned j = 0; j < d; ++j) {
      const SpMat& u = h.U[i * d + j];
      for (int c = 0; c < u.outerSize(); ++c)
        for (SpMat::InnerIterator it(u, c); it; ++it)
          trip.emplace_back(static_cast<int>(i * N + it.row()), static_cast<int>(j * N + it.col()), it.value());
    }
  const auto dN = static_cast<int>(d * N);
  SpMat Uf(dN, dN);
  Uf.setFromTriplets(trip.begin(), trip.end());
  SpMat Id(dN, dN);
  Id.setIdentity();
  SpMat UtU = SpMat(Uf.transpose()) * Uf - Id;
  SpMat UUt = Uf * SpMat(Uf.transpose()) - Id;

  auto in_band = [&](std::size_t idx, std::size_t lo, std::size_t hi) {
    std::size_t len = rep.word_at(idx % N).size();
    return len >= lo && len <= hi;
  };
  auto column_defect = [&](const SpMat& E, std::size_t lo, std::size_t hi) {
    double s = 0;
    for (int c = 0; c < E.outerSize(); ++c) {
      if (!in_band(static_cast<std::size_t>(c), lo, hi)) continue;
      for (SpMat::InnerIterator it(E, c); it; ++it) s += it.value() * it.value();
    }
    return std::sqrt(s);
  };
  const std::size_t hi = n >= 2 ? n - 2 : 0;
  h.interior_defect = column_defect(UtU, 2, hi);
  h.short_word_defect = column_defect(UtU, 0, std::min<std::size_t>(1, hi));
  // UU^* - 1 is symmetric, so its interior rows are its interior columns.
  h.co_isometry_defect = column_defect(UUt, 2, hi);

  SpMat In = identity(N);
  double hd = 0;
  for (const SpMat* a : {&h.G0, &h.G1})
    for (const SpMat* b : {&h.G0, &h.G1}) {
      SpMat E = SpMat(a->transpose()) * (*b);
      if (a == b) E -= In;
      for (int c = 0; c < E.outerSize(); ++c) {
        std::size_t len = rep.word_at(static_cast<std::size_t>(c)).size();
        if (len < 2 || len > hi) continue;
        for (SpMat::InnerIterator it(E, c); it; ++it) hd += it.value() * it.value();
      }
    }
  h.halving_defect = std::sqrt(hd);

  // zeta = G_0 psi; G_0 is a partial permutation so its Alice marginal is diagonal.
  VectorXd rho = VectorXd::Zero(static_cast<Eigen::Index>(N));
  const VectorXd& c = rep.psi_diag();
  for (int k = 0; k < h.G0.outerSize(); ++k)
    for (SpMat::InnerIterator it(h.G0, k); it; ++it) rho[it.row()] += it.value() * it.value() * c[k] * c[k];
  h.zeta_norm = std::sqrt(rho.sum());
  h.zeta_density = rho / rho.sum();

  auto trace_rho = [&](const SpMat& A) {
    double s = 0;
    for (int k = 0; k < A.outerSize(); ++k)
      for (SpMat::InnerIterator it(A, k); it; ++it)
        if (it.row() == it.col()) s += it.value() * h.zeta_density[it.row()];
    return s;
  };
  for (auto& m : words::monomials_up_to(d, 2)) {
    SpMat X = rep.word_op(m);
    double base = trace_rho(X);
    for (unsigned i = 0; i < d; ++i)
      for (unsigned j = 0; j < d; ++j) {
        SpMat A = SpMat(h.U[i * d].transpose()) * X * h.U[j * d];
        double target = i == j ? rep.alpha()[i] * rep.alpha()[i] * base : 0.0;
        h.quasi_free_residual = std::max(h.quasi_free_residual, std::abs(trace_rho(A) - target));
      }
  }
  return h;
}

MarginalReport marginal_equivalence_check(const HalmosResult& h, const TruncatedRep& rep) {
  if (h.interior_defect > 1e-3)
    throw std::runtime_error("unitarity defect " + std::to_string(h.interior_defect) +
                             " exceeds 1e-3; the marginal comparison is not meaningful");
  const unsigned d = h.d;
  MarginalReport out;
  out.n = h.n;
  auto trace_rho = [&](const SpMat& A) {
    double s = 0;
    for (int k = 0; k < A.outerSize(); ++k)
      for (SpMat::InnerIterator it(A, k); it; ++it)
        if (it.row() == it.col()) s += it.value() * h.zeta_density[it.row()];
    return s;
  };
  auto alpha2 = [&](unsigned k) { return rep.alpha()[k] * rep.alpha()[k]; };
  // X = E_ab (x) Y: left <R^*XR (e_0 zeta), e_0 zeta>, right Tr(rho(phi) (x) omega)(X)
  auto left_of = [&](unsigned a, unsigned b, const SpMat& Y) {
    return trace_rho(SpMat(SpMat(h.U[a * d].transpose()) * Y * h.U[b * d]));
  };
  for (auto& m : words::monomials_up_to(d, 2)) {
    SpMat Y = rep.word_op(m);
    double wy = trace_rho(Y);
    for (unsigned a = 0; a < d; ++a)
      for (unsigned b = 0; b < d; ++b) {
        MarginalRow row;
        row.label = "E" + std::to_string(a) + std::to_string(b) + "(x)" +
                    words::monomial_to_string(m, d);
        row.left = left_of(a, b, Y);
        row.right = a == b ? alpha2(a) * wy : 0.0;
        out.max_deviation = std::max(out.max_deviation, std::abs(row.left - row.right));
        out.rows.push_back(std::move(row));
      }
  }
  SpMat I = identity(rep.dim());
  MarginalRow total{"I(x)1", 0, 0};
  for (unsigned k = 0; k < d; ++k) {
    total.left += left_of(k, k, I);
    total.right += alpha2(k);
  }
  out.max_deviation = std::max(out.max_deviation, std::abs(total.left - total.right));
  out.rows.push_back(total);
  return out;
}

}  // namespace embezzle::protocol
