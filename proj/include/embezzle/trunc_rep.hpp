#pragma once

#include "embezzle/schmidt.hpp"
#include "embezzle/word.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <stdexcept>
#include <vector>

namespace embezzle::trunc {

using SpMat = Eigen::SparseMatrix<double>;
using words::Monomial;
using words::Word;

class ResourceGuard : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BuildLimits {
  double max_cells = 1e8;
  // EMBEZZLE_MAX_CELLS overrides the default cap.
  static BuildLimits from_env();
};

// Prefix shifts on the words of length <= n. A vector of the doubled space
// is an N x N matrix X (Alice word, Bob word); an Alice operator A acts as
// A X and a Bob operator B as X B^T.
class TruncatedRep {
 public:
  static TruncatedRep build(const SchmidtSpec& s, unsigned n, const BuildLimits& limits = BuildLimits::from_env());

  unsigned d() const { return d_; }
  unsigned depth() const { return n_; }
  std::size_t dim() const { return words_.size(); }
  const std::vector<double>& alpha() const { return alpha_; }

  std::size_t index_of(const Word& w) const;
  const Word& word_at(std::size_t k) const { return words_[k]; }

  // V_i on Alice's leg, equally W_i on Bob's leg.
  const SpMat& shift(std::size_t i) const { return shift_[i]; }
  // V_mu V_nu^*; both lengths must be <= n.
  SpMat word_op(const Monomial& m) const;
  // Projection onto words with lo <= length <= hi.
  SpMat level_projection(std::size_t lo, std::size_t hi) const;

  // psi_n as a diagonal N x N matrix, entries alpha_w / sqrt(n+1).
  const Eigen::VectorXd& psi_diag() const { return psi_; }
  SpMat psi() const;

  SpMat alice(const SpMat& A, const SpMat& X) const { return A * X; }
  SpMat bob(const SpMat& B, const SpMat& X) const { return SpMat(X * SpMat(B.transpose())); }

 private:
  unsigned d_ = 0, n_ = 0;
  std::vector<double> alpha_;
  std::vector<Word> words_;
  std::vector<SpMat> shift_;
  Eigen::VectorXd psi_;
};

std::size_t truncated_dim(unsigned d, unsigned n);

double frobenius_inner(const SpMat& a, const SpMat& b);

struct StructureReport {
  double psi_norm_defect = 0;
  double isometry_defect = 0;     // V_i^* V_i - P_{<= n-1}
  double orthogonality_defect = 0;  // V_i^* V_j, i != j
  double range_defect = 0;        // sum_i V_i V_i^* - P_{nonempty}
  double commutator = 0;          // [A (x) 1, 1 (x) B]
  double max() const;
};

StructureReport check_structure(const TruncatedRep& r);

double rep_state(const TruncatedRep& r, const Monomial& m);

struct ResidualReport {
  unsigned n = 0;
  Eigen::MatrixXd inner;   // <R_i0 T_j0 psi, psi> - delta_ij alpha_i
  Eigen::MatrixXd vector;  // || R_i0 T_j0 psi - delta_ij alpha_i psi ||
  double full = 0;
};

ResidualReport embezzle_residual(const TruncatedRep& r);

struct SweepRow {
  unsigned n = 0;
  Monomial m;
  double rep_value = 0, exact_value = 0, abs_diff = 0, bound = 0;
};

std::vector<SweepRow> convergence_sweep(const SchmidtSpec& s, std::vector<Monomial> monomials, unsigned n_lo,
                                        unsigned n_hi, const BuildLimits& limits = BuildLimits::from_env());

struct ConjugationEntry {
  Monomial m;
  double defect = 0;
};

struct ConjugationReport {
  unsigned n = 0, L = 0;
  double max_defect = 0;
  std::vector<ConjugationEntry> entries;
};

// || V_mu V_nu^* psi - (alpha_nu / alpha_mu) W_nu W_mu^* psi || over |mu|, |nu| <= L.
ConjugationReport modular_conjugation_check(const TruncatedRep& r, unsigned L);

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace embezzle::trunc
