#include "doctest.h"

#include "embezzle/state.hpp"
#include "embezzle/trunc_rep.hpp"

#include <cmath>
#include <map>

using namespace embezzle;
using namespace embezzle::trunc;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

// Dense model built from scratch: words as digit vectors, shifts as dense
// matrices, the doubled space as an explicit Kronecker product.
struct DenseModel {
  unsigned d, n;
  std::vector<std::vector<unsigned>> words;
  std::map<std::vector<unsigned>, int> index;
  std::vector<MatrixXd> V;
  VectorXd psi;

  DenseModel(const std::vector<double>& alpha, unsigned n_) : d(static_cast<unsigned>(alpha.size())), n(n_) {
    std::vector<std::vector<unsigned>> layer{{}};
    for (unsigned len = 0; len <= n; ++len) {
      for (auto& w : layer) {
        index[w] = static_cast<int>(words.size());
        words.push_back(w);
      }
      std::vector<std::vector<unsigned>> next;
      for (auto& w : layer)
        for (unsigned a = 0; a < d; ++a) {
          auto x = w;
          x.push_back(a);
          next.push_back(x);
        }
      layer = next;
    }
    const int N = static_cast<int>(words.size());
    for (unsigned i = 0; i < d; ++i) {
      MatrixXd M = MatrixXd::Zero(N, N);
      for (auto& w : words)
        if (w.size() < n) {
          std::vector<unsigned> x{i};
          x.insert(x.end(), w.begin(), w.end());
          M(index.at(x), index.at(w)) = 1;
        }
      V.push_back(M);
    }
    psi = VectorXd::Zero(N * N);
    for (auto& w : words) {
      double a = 1 / std::sqrt(n + 1.0);
      for (auto l : w) a *= alpha[l];
      int k = index.at(w);
      psi[k * N + k] = a;
    }
  }

  int N() const { return static_cast<int>(words.size()); }
  MatrixXd kron(const MatrixXd& a, const MatrixXd& b) const {
    MatrixXd K(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
      for (int j = 0; j < a.cols(); ++j) K.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return K;
  }
  MatrixXd alice(const MatrixXd& A) const { return kron(A, MatrixXd::Identity(N(), N())); }
  MatrixXd bob(const MatrixXd& B) const { return kron(MatrixXd::Identity(N(), N()), B); }
  MatrixXd word(const words::Monomial& m) const {
    MatrixXd L = MatrixXd::Identity(N(), N()), R = MatrixXd::Identity(N(), N());
    for (auto l : m.mu.letters()) L = L * V[l];
    for (auto l : m.nu.letters()) R = R * V[l];
    return L * R.transpose();
  }
};

}  // namespace

TEST_CASE("dimensions and indexing") {
  CHECK(truncated_dim(2, 3) == 15);
  CHECK(truncated_dim(3, 2) == 13);
  auto r = TruncatedRep::build(SchmidtSpec::uniform(3), 3);
  CHECK(r.dim() == 40);
  for (std::size_t k = 0; k < r.dim(); ++k) CHECK(r.index_of(r.word_at(k)) == k);
  CHECK_THROWS(r.index_of(words::Word{0, 0, 0, 0}));
  CHECK_THROWS(TruncatedRep::build(SchmidtSpec::uniform(2), 0));
}

TEST_CASE("resource guard") {
  BuildLimits tiny{100};
  CHECK_THROWS_AS(TruncatedRep::build(SchmidtSpec::uniform(2), 3, tiny), ResourceGuard);
  CHECK_NOTHROW(TruncatedRep::build(SchmidtSpec::uniform(2), 2, tiny));
}

TEST_CASE("structure defects vanish") {
  for (auto spec : {SchmidtSpec::uniform(2), SchmidtSpec::parse("1/2,1/3,1/6")})
    for (unsigned n : {2u, 3u, 5u}) {
      auto r = TruncatedRep::build(spec, n);
      auto st = check_structure(r);
      CHECK(st.max() < 1e-12);
    }
}

TEST_CASE("shift operators match the dense model") {
  auto spec = SchmidtSpec::parse("2/3,1/3");
  auto r = TruncatedRep::build(spec, 3);
  DenseModel m(spec.alpha(), 3);
  REQUIRE(static_cast<int>(r.dim()) == m.N());
  for (unsigned i = 0; i < 2; ++i) CHECK((MatrixXd(r.shift(i)) - m.V[i]).norm() == 0);
  for (auto& w : words::words_up_to(2, 3)) {
    std::vector<unsigned> key(w.letters().begin(), w.letters().end());
    CHECK(r.index_of(w) == static_cast<std::size_t>(m.index.at(key)));
  }
}

TEST_CASE("rep_state against the dense model and the closed form") {
  for (auto spec : {SchmidtSpec::parse("2/3,1/3"), SchmidtSpec::parse("1/2,1/3,1/6")}) {
    const unsigned n = spec.d() == 2 ? 4 : 3;
    auto r = TruncatedRep::build(spec, n);
    DenseModel dm(spec.alpha(), n);
    for (auto& m : words::monomials_up_to(spec.d(), 2)) {
      double oracle = dm.psi.dot(dm.alice(dm.word(m)) * dm.psi);
      double got = rep_state(r, m);
      CHECK(std::abs(got - oracle) < 1e-13);
      double closed = 0;
      if (m.mu == m.nu) {
        closed = (n + 1.0 - static_cast<double>(m.mu.size())) / (n + 1.0);
        for (auto l : m.mu.letters()) closed *= spec.alpha_squared(l);
      }
      CHECK(std::abs(got - closed) < 1e-13);
    }
  }
}

TEST_CASE("embezzlement residuals against the dense model") {
  auto spec = SchmidtSpec::parse("2/3,1/3");
  for (unsigned n : {2u, 3u, 4u}) {
    auto r = TruncatedRep::build(spec, n);
    DenseModel dm(spec.alpha(), n);
    auto res = embezzle_residual(r);
    double full_sq = 0;
    for (unsigned i = 0; i < 2; ++i)
      for (unsigned j = 0; j < 2; ++j) {
        VectorXd z = dm.alice(dm.V[i].transpose()) * dm.bob(dm.V[j].transpose()) * dm.psi;
        double target = i == j ? spec.alpha()[i] : 0.0;
        VectorXd diff = z - target * dm.psi;
        CHECK(std::abs(res.vector(i, j) - diff.norm()) < 1e-13);
        CHECK(std::abs(res.inner(i, j) - (z.dot(dm.psi) - target)) < 1e-13);
        full_sq += diff.squaredNorm();
      }
    CHECK(std::abs(res.full - std::sqrt(full_sq)) < 1e-13);
    for (unsigned i = 0; i < 2; ++i) {
      CHECK(std::abs(res.vector(i, i) - spec.alpha()[i] / std::sqrt(n + 1.0)) < 1e-13);
      CHECK(std::abs(res.inner(i, i) + spec.alpha()[i] / (n + 1.0)) < 1e-13);
    }
    CHECK(std::abs(res.full - 1 / std::sqrt(n + 1.0)) < 1e-13);
  }
}

TEST_CASE("residuals are non-increasing in n") {
  auto spec = SchmidtSpec::parse("1/2,1/3,1/6");
  ResidualReport prev;
  for (unsigned n = 2; n <= 6; ++n) {
    auto res = embezzle_residual(TruncatedRep::build(spec, n));
    if (n > 2) {
      CHECK(res.full <= prev.full);
      CHECK((res.vector.array() <= prev.vector.array() + 1e-15).all());
      CHECK((res.inner.array().abs() <= prev.inner.array().abs() + 1e-15).all());
    }
    prev = res;
  }
}

TEST_CASE("convergence sweep rows") {
  auto spec = SchmidtSpec::uniform(2);
  std::vector<words::Monomial> ms{{words::Word{1}, words::Word{1}}, {words::Word{0}, words::Word{0}},
                                  {words::Word{0}, words::Word{1}}};
  auto rows = convergence_sweep(spec, ms, 3, 5);
  REQUIRE(rows.size() == 9);
  CHECK(rows[0].n == 3);
  CHECK(rows[0].m < rows[1].m);
  CHECK(rows[8].n == 5);
  for (auto& row : rows) {
    CHECK(row.abs_diff <= row.bound + 1e-15);
    if (row.m.mu != row.m.nu) CHECK(row.rep_value == 0);
  }
  CHECK_THROWS(convergence_sweep(spec, {{words::Word{0, 0, 0, 0}, words::Word{}}}, 3, 5));
}

TEST_CASE("modular conjugation identity holds exactly") {
  for (auto spec : {SchmidtSpec::parse("2/3,1/3"), SchmidtSpec::parse("1/2,1/3,1/6")}) {
    auto r = TruncatedRep::build(spec, 4);
    auto c = modular_conjugation_check(r, 2);
    CHECK(c.max_defect < 1e-14);
    std::size_t w = words::words_up_to(spec.d(), 2).size();
    CHECK(c.entries.size() == w * w);
  }
}

TEST_CASE("log-log slope") {
  std::vector<double> x, y;
  for (int k = 1; k <= 6; ++k) {
    x.push_back(k);
    y.push_back(3 / std::sqrt(static_cast<double>(k)));
  }
  CHECK(std::abs(loglog_slope(x, y) + 0.5) < 1e-12);
  CHECK_THROWS(loglog_slope({1}, {1}));
}
