#pragma once

#include "embezzle/trunc_rep.hpp"

#include <Eigen/Dense>

#include <memory>
#include <vector>

namespace embezzle::protocol {

using trunc::SpMat;
using trunc::TruncatedRep;

struct SchmidtNormalization {
  Eigen::VectorXd alpha;  // descending
  Eigen::MatrixXd U_f, U_g;
  double residual = 0;
};

// phi is the coefficient matrix of sum_ab phi_ab e_a (x) e_b, real entries.
SchmidtNormalization schmidt_normalize(const Eigen::MatrixXd& phi);

// Bob-side operator on the doubled space: a Bob-leg matrix B acting as
// X -> X B^T, or a dense operator on vec(X) with index a*N + b.
struct BobOp {
  bool full = false;
  SpMat leg;
  Eigen::MatrixXd dense;

  SpMat apply(const SpMat& X) const;
  bool is_zero() const;
};

// R (Alice) and T (Bob) as d x d block arrays, row-major. Register bases F, G
// (columns f_i, g_j) are the identity in canonical form; the protocol starts
// from f_0 (x) psi (x) g_0 and targets f(phi (x) psi).
struct ProtocolInstance {
  std::shared_ptr<const TruncatedRep> rep;
  unsigned d = 0;
  std::vector<SpMat> R;
  std::vector<BobOp> T;
  Eigen::MatrixXd F, G;
  Eigen::MatrixXd phi;

  const SpMat& r(unsigned i, unsigned k) const { return R[i * d + k]; }
  const BobOp& t(unsigned j, unsigned l) const { return T[j * d + l]; }
};

// R_i0 = V_i^*, T_j0 = W_j^*, phi = diag(alpha).
ProtocolInstance canonical_instance(std::shared_ptr<const TruncatedRep> rep);
ProtocolInstance zero_instance(std::shared_ptr<const TruncatedRep> rep);

// Conjugate a canonical instance by (U_f, U_g) so that it embezzles
// phi = U_f^T diag(alpha) U_g.
ProtocolInstance conjugate(const ProtocolInstance& canonical, const SchmidtNormalization& sn);

struct ConditionReport {
  unsigned n = 0;
  double full = 0;             // || (R (x) 1)(1 (x) T)(f_0 psi g_0) - f(phi (x) psi) ||
  Eigen::MatrixXd inner;       // <Z_ij, psi> - phi'_ij
  Eigen::MatrixXd vector;      // || Z_ij - phi'_ij psi ||
  double max_abs = 0;          // max |inner|
  bool consistent = false;     // |inner| <= vector pairwise, full^2 = sum vector^2
};

ConditionReport bipartite_check(const ProtocolInstance& p);

struct BobBuild {
  ProtocolInstance instance;
  unsigned span_len = 0;
  std::size_t span_dim = 0;
  double condition = 0;
  double shift_match = 0;          // built W_i vs canonical W_i on the span
  double t_on_psi_match = 0;       // T_j0 psi vs alpha_j R_j0^* psi
  bool full_span = false;          // span is the whole doubled space
  double commutation_defect = 0;   // [W_i, Alice generators] on span vectors A keeps in the span
  double contraction_defect = 0;   // max(0, ||T|| - 1)
  double projection_defect = 0;    // T^*T against a projection times E_00; NaN unless full_span
  double inner_residual_max = 0;
};

struct BobOptions {
  unsigned span_len = 0;            // 0 means n
  std::size_t max_doubled_dim = 1100;
  double max_condition = 1e12;
};

BobBuild build_bob(std::shared_ptr<const TruncatedRep> rep, const BobOptions& opt = {});

struct HalmosResult {
  unsigned d = 0, n = 0;
  bool prepend_halving = true;  // false: index halving e_k -> e_{2k}, e_{2k+1}
  std::vector<SpMat> U;         // d x d blocks, row-major
  SpMat G0, G1;
  double interior_defect = 0;   // U^*U - 1 on columns with 2 <= |w| <= n-2
  double short_word_defect = 0; // same on columns with |w| <= 1
  double co_isometry_defect = 0; // U U^* - 1 on rows with 2 <= |w| <= n-2
  double halving_defect = 0;    // G_a^* G_b - delta_ab on the interior
  double zeta_norm = 0;
  Eigen::VectorXd zeta_density; // normalized Alice marginal of zeta = G_0 psi, diagonal
  double quasi_free_residual = 0;  // max over X with words <= 2
};

HalmosResult halmos_unitary(const TruncatedRep& rep);

struct MarginalRow {
  std::string label;
  double left = 0, right = 0;
};

struct MarginalReport {
  unsigned n = 0;
  double max_deviation = 0;
  std::vector<MarginalRow> rows;
};

MarginalReport marginal_equivalence_check(const HalmosResult& h, const TruncatedRep& rep);

}  // namespace embezzle::protocol
