#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>

#include "ncfr/errors.hpp"
#include "ncfr/word.hpp"

namespace ncfr {

using cplx = std::complex<double>;
using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;

/// Numerical knobs shared by every routine that has to decide "zero or not".
struct Tolerances {
  /// Singular values below rank_rel * sigma_max are treated as zero.
  double rank_rel = 1e-10;
  /// Eigenvalues down to -psd_rel * max(1, ||M||_2) still count as PSD.
  double psd_rel = 1e-9;
  /// Relative successive-difference threshold for depth truncations.
  double conv_rel = 1e-9;

  void validate() const {
    auto ok = [](double t) { return t > 0.0 && t < 1.0; };
    if (!ok(rank_rel) || !ok(psd_rel) || !ok(conv_rel)) {
      throw Error(ErrorKind::Config, "tolerances must lie in (0, 1)");
    }
  }
};

/// Relative Hermitian defect above which a matrix is rejected outright.
inline constexpr double kHermitianTol = 1e-10;

template <typename Derived>
double hermitian_defect(const Eigen::MatrixBase<Derived>& M) {
  const double scale = std::max(1.0, static_cast<double>(M.norm()));
  return static_cast<double>((M - M.adjoint()).norm()) / scale;
}

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& M, const char* what) {
  if (M.rows() != M.cols()) {
    throw Error(ErrorKind::ShapeMismatch, std::string(what) + " needs a square matrix, got " +
                                              std::to_string(M.rows()) + "x" +
                                              std::to_string(M.cols()));
  }
}

template <typename Derived>
void require_hermitian(const Eigen::MatrixBase<Derived>& M, const char* what) {
  require_square(M, what);
  if (const double defect = hermitian_defect(M); defect > kHermitianTol) {
    throw Error(ErrorKind::NotHermitian,
                std::string(what) + ": relative defect " + std::to_string(defect));
  }
}

/// Eigendecomposition of the Hermitian part of M.
template <typename Derived>
auto hermitian_eig(const Eigen::MatrixBase<Derived>& M) {
  using Plain = typename Derived::PlainObject;
  const Plain sym = (M + M.adjoint()) / 2;
  return Eigen::SelfAdjointEigenSolver<Plain>(sym);
}

/// V f(Lambda) V^*, with f applied entrywise to the eigenvalues.
template <typename Solver, typename Fn>
auto spectral_apply(const Solver& es, Fn f) {
  using Plain = typename Solver::MatrixType;
  const auto& values = es.eigenvalues();
  const Plain& V = es.eigenvectors();
  Plain out = V * values.unaryExpr(f).asDiagonal() * V.adjoint();
  return Plain((out + out.adjoint()) / 2);
}

struct PsdReport {
  bool psd = true;
  double min_eigenvalue = 0.0;
  double spectral_norm = 0.0;
};

template <typename Derived>
PsdReport is_psd(const Eigen::MatrixBase<Derived>& M, const Tolerances& tol) {
  require_hermitian(M, "is_psd");
  if (M.rows() == 0) return {};
  const auto es = hermitian_eig(M);
  const auto& values = es.eigenvalues();
  const double lo = values(0);
  const double norm = std::max(std::abs(lo), std::abs(static_cast<double>(values(values.size() - 1))));
  return {lo >= -tol.psd_rel * std::max(1.0, norm), lo, norm};
}

/// Unique PSD square root. Eigenvalues inside the PSD slack clamp to zero.
template <typename Derived>
typename Derived::PlainObject hermitian_sqrt(const Eigen::MatrixBase<Derived>& M,
                                             const Tolerances& tol) {
  require_hermitian(M, "hermitian_sqrt");
  if (M.rows() == 0) return M;
  const auto es = hermitian_eig(M);
  const auto& values = es.eigenvalues();
  const double norm = std::max(std::abs(values(0)), std::abs(values(values.size() - 1)));
  if (values(0) < -tol.psd_rel * std::max(1.0, norm)) {
    throw Error(ErrorKind::NotPositive,
                "hermitian_sqrt: minimum eigenvalue " + std::to_string(values(0)));
  }
  return spectral_apply(es, [](double x) { return x > 0.0 ? std::sqrt(x) : 0.0; });
}

/// Moore-Penrose pseudoinverse with a cutoff relative to sigma_max.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> pseudo_inverse(
    const Eigen::MatrixBase<Derived>& M, const Tolerances& tol) {
  using Out = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (M.size() == 0) return Out::Zero(M.cols(), M.rows());
  Eigen::BDCSVD<Out> svd(Out(M), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sigma = svd.singularValues();
  const double cutoff = tol.rank_rel * static_cast<double>(sigma(0));
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sigma.size());
  for (Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cutoff && sigma(i) > 0.0) inv(i) = 1.0 / sigma(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

/// M^p on the retained range of a PSD matrix, for p in {-1, -1/2, 1/2}.
///
/// Rank is decided on the eigenvalues of M itself so that the inverse square
/// root and the inverse agree on which directions are null.
template <typename Derived>
typename Derived::PlainObject psd_power(const Eigen::MatrixBase<Derived>& M, double p,
                                        const Tolerances& tol) {
  require_square(M, "psd_power");
  if (M.rows() == 0) return M;
  const auto es = hermitian_eig(M);
  const double top = std::max(0.0, static_cast<double>(es.eigenvalues().maxCoeff()));
  const double cutoff = tol.rank_rel * top;
  return spectral_apply(es, [&](double x) { return x > cutoff && x > 0.0 ? std::pow(x, p) : 0.0; });
}

/// Number of eigenvalues of a PSD matrix above the relative rank cutoff.
template <typename Derived>
Index psd_rank(const Eigen::MatrixBase<Derived>& M, const Tolerances& tol) {
  if (M.rows() == 0) return 0;
  const auto es = hermitian_eig(M);
  const double top = std::max(0.0, static_cast<double>(es.eigenvalues().maxCoeff()));
  return (es.eigenvalues().array() > tol.rank_rel * top).count();
}

/// Q tensor I_{d^j} acting on trailing letters.
///
/// Q is read as a grid of block x block tiles; tile (r, c) of Q lands on tile
/// (r*d^j + s, c*d^j + s) for every suffix offset s. With block = 1 this is
/// the ordinary Kronecker product with the identity; with block = dim(H) it
/// appends j letters to every word index of a level-ordered matrix.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> embed_with_identity(
    const Eigen::MatrixBase<Derived>& Q, int d, int j, Index block = 1) {
  using Out = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (j < 0) throw Error(ErrorKind::Config, "embed_with_identity: negative power");
  if (block < 1 || Q.rows() % block != 0 || Q.cols() % block != 0) {
    throw Error(ErrorKind::ShapeMismatch, "embed_with_identity: shape not a multiple of block");
  }
  if (j == 0) return Q;
  const Index copies = level_size(d, j);
  const Index row_tiles = Q.rows() / block;
  const Index col_tiles = Q.cols() / block;
  Out out = Out::Zero(Q.rows() * copies, Q.cols() * copies);
  for (Index r = 0; r < row_tiles; ++r) {
    for (Index c = 0; c < col_tiles; ++c) {
      const auto tile = Q.block(r * block, c * block, block, block);
      if (tile.isZero(0.0)) continue;
      for (Index s = 0; s < copies; ++s) {
        out.block((r * copies + s) * block, (c * copies + s) * block, block, block) = tile;
      }
    }
  }
  return out;
}

}  // namespace ncfr
