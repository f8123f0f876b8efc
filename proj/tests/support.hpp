#pragma once

// Test-only oracles. Nothing here calls into the assembly, Schur or factor
// code paths that the tests check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "ncfr/symbol.hpp"

namespace ncfr::testing {

using Rng = std::mt19937_64;

inline double unit(Rng& rng) { return std::uniform_real_distribution<double>(-1.0, 1.0)(rng); }

inline MatrixXc random_matrix(Index rows, Index cols, Rng& rng) {
  MatrixXc M(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) M(i, j) = cplx(unit(rng), unit(rng));
  return M;
}

inline MatrixXc random_psd(Index n, Index rank, Rng& rng) {
  const MatrixXc X = random_matrix(n, rank, rng);
  MatrixXc M = X * X.adjoint();
  return (M + M.adjoint()) / 2;
}

inline VectorXc random_vector(Index n, Rng& rng) { return random_matrix(n, 1, rng).col(0); }

/// Truncated Fock space with explicit left-creation matrices L_j: xi_w -> xi_{jw}.
/// Words are generated independently of ncfr::enumerate_level.
class FockOracle {
 public:
  FockOracle(int d, int depth) : d_(d) {
    std::vector<std::vector<int>> frontier{{}};
    words_.push_back({});
    for (int k = 1; k <= depth; ++k) {
      std::vector<std::vector<int>> next;
      for (const auto& w : frontier) {
        for (int a = 1; a <= d; ++a) {
          auto x = w;
          x.push_back(a);
          next.push_back(x);
        }
      }
      std::sort(next.begin(), next.end());
      for (const auto& w : next) words_.push_back(w);
      frontier = next;
    }
    for (std::size_t i = 0; i < words_.size(); ++i) index_[words_[i]] = static_cast<Index>(i);
  }

  Index size() const { return static_cast<Index>(words_.size()); }
  const std::vector<std::vector<int>>& words() const { return words_; }

  Eigen::MatrixXd creation(int j) const {
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(size(), size());
    for (std::size_t c = 0; c < words_.size(); ++c) {
      std::vector<int> r{j};
      r.insert(r.end(), words_[c].begin(), words_[c].end());
      if (auto it = index_.find(r); it != index_.end()) L(it->second, static_cast<Index>(c)) = 1.0;
    }
    return L;
  }

  /// L_w = L_{w_1} ... L_{w_k}; compressing a product of creations equals the
  /// product of compressions because word lengths only grow.
  Eigen::MatrixXd word_operator(std::span<const int> w) const {
    Eigen::MatrixXd L = Eigen::MatrixXd::Identity(size(), size());
    for (int a : w) L = L * creation(a);
    return L;
  }

  /// Word-major, H-minor Kronecker product L (x) X.
  static MatrixXc kron(const Eigen::MatrixXd& L, const MatrixXc& X) {
    MatrixXc out = MatrixXc::Zero(L.rows() * X.rows(), L.cols() * X.cols());
    for (Index i = 0; i < L.rows(); ++i)
      for (Index j = 0; j < L.cols(); ++j)
        if (L(i, j) != 0.0) out.block(i * X.rows(), j * X.cols(), X.rows(), X.cols()) = L(i, j) * X;
    return out;
  }

  MatrixXc hermitian_operator(const HermitianSymbol& Q) const {
    const Index h = Q.h_dim();
    MatrixXc T = MatrixXc::Zero(size() * h, size() * h);
    for (const auto& [w, q] : Q.coefficients()) {
      const MatrixXc part = kron(word_operator(w.letters()), q);
      T += part;
      if (!w.empty()) T += part.adjoint();
    }
    return T;
  }

  MatrixXc analytic_operator(const AnalyticSymbol& F) const {
    const Index h = F.h_dim();
    MatrixXc T = MatrixXc::Zero(size() * h, size() * h);
    for (const auto& [w, f] : F.coefficients()) T += kron(word_operator(w.letters()), f);
    return T;
  }

 private:
  int d_;
  std::vector<std::vector<int>> words_;
  std::map<std::vector<int>, Index> index_;
};

/// Outer spectral factor of the scalar Laurent polynomial
/// w(z) = q_0 + sum_k q_k z^k + conj(q_k) z^-k, via the roots of z^n w(z):
/// keep the n roots outside the unit circle, p(z) = c prod (1 - z / r_i), c > 0.
inline std::vector<cplx> classical_outer_factor(const std::vector<cplx>& q) {
  const int n = static_cast<int>(q.size()) - 1;
  if (n == 0) return {std::sqrt(q[0].real())};
  const int deg = 2 * n;
  // Coefficients a_i of z^i in z^n w(z).
  std::vector<cplx> a(static_cast<std::size_t>(deg + 1));
  for (int v = 0; v <= n; ++v) {
    a[static_cast<std::size_t>(n + v)] = q[static_cast<std::size_t>(v)];
    a[static_cast<std::size_t>(n - v)] = std::conj(q[static_cast<std::size_t>(v)]);
  }
  a[static_cast<std::size_t>(n)] = q[0];
  MatrixXc companion = MatrixXc::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -a[static_cast<std::size_t>(i)] / a[static_cast<std::size_t>(deg)];
  Eigen::ComplexEigenSolver<MatrixXc> es(companion);
  std::vector<cplx> roots(es.eigenvalues().data(), es.eigenvalues().data() + deg);
  std::sort(roots.begin(), roots.end(), [](cplx x, cplx y) { return std::abs(x) > std::abs(y); });

  std::vector<cplx> g{1.0};
  for (int i = 0; i < n; ++i) {
    const cplx r = roots[static_cast<std::size_t>(i)];
    std::vector<cplx> next(g.size() + 1, 0.0);
    for (std::size_t k = 0; k < g.size(); ++k) {
      next[k] += g[k];
      next[k + 1] -= g[k] / r;
    }
    g = next;
  }
  double energy = 0.0;
  for (cplx x : g) energy += std::norm(x);
  const double c = std::sqrt(q[0].real() / energy);
  for (cplx& x : g) x *= c;
  return g;
}

/// Scalar d = 1 symbols from coefficient lists.
inline HermitianSymbol scalar_hermitian(int d, const std::map<std::string, cplx>& coeffs, int degree) {
  HermitianSymbol Q(d, degree, 1);
  for (const auto& [w, c] : coeffs) Q.set(Word::parse(w, d), MatrixXc::Constant(1, 1, c));
  return Q;
}

inline AnalyticSymbol scalar_analytic(int d, const std::map<std::string, cplx>& coeffs, int degree) {
  AnalyticSymbol F(d, degree, 1);
  for (const auto& [w, c] : coeffs) F.set(Word::parse(w, d), MatrixXc::Constant(1, 1, c));
  return F;
}

inline AnalyticSymbol random_analytic(int d, int degree, Index h, Rng& rng) {
  AnalyticSymbol F(d, degree, h);
  for (int k = 0; k <= degree; ++k)
    for (Index off = 0; off < level_size(d, k); ++off) F.set(word_at(d, k, off), random_matrix(h, h, rng));
  return F;
}

inline double rel_err(const MatrixXc& a, const MatrixXc& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

}  // namespace ncfr::testing
