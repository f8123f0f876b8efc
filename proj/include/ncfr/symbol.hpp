#pragma once

#include <map>

#include "ncfr/matrix_core.hpp"
#include "ncfr/word.hpp"

namespace ncfr {

struct SymbolShape {
  int d = 1;
  int degree = 0;
  Index h_dim = 1;
  bool operator==(const SymbolShape&) const = default;
};

enum class SymbolKind { Hermitian, Analytic };

/// Coefficient family {X_v : |v| <= degree} indexed by words, stored sparsely.
///
/// Kind::Hermitian describes T_Q = Q_0 (x) I + sum Q_v (x) L_v + sum Q_v^* (x) L_v^*;
/// the adjoint half is implicit and Q_0 is kept Hermitian on every write.
/// Kind::Analytic describes T_F = sum F_v (x) L_v. Absent words are zero.
template <SymbolKind Kind>
class Symbol {
 public:
  Symbol(int d, int degree, Index h_dim);
  explicit Symbol(const SymbolShape& shape) : Symbol(shape.d, shape.degree, shape.h_dim) {}

  const SymbolShape& shape() const noexcept { return shape_; }
  int alphabet() const noexcept { return shape_.d; }
  int degree() const noexcept { return shape_.degree; }
  Index h_dim() const noexcept { return shape_.h_dim; }

  /// Stores a coefficient. For Hermitian symbols the constant term is replaced
  /// by its Hermitian part; the return value is the relative size of that
  /// adjustment (always 0 otherwise).
  double set(const Word& v, const MatrixXc& value);

  const MatrixXc* find(const Word& v) const;
  /// Coefficient of v, or the zero matrix.
  MatrixXc coeff(const Word& v) const;
  const std::map<Word, MatrixXc>& coefficients() const noexcept { return coeffs_; }

  /// col(X_v)_{|v| = k}, shape (h_dim d^k) x h_dim.
  MatrixXc level_stack(int k) const;

  bool is_zero() const;

 private:
  SymbolShape shape_;
  std::map<Word, MatrixXc> coeffs_;
};

using HermitianSymbol = Symbol<SymbolKind::Hermitian>;
using AnalyticSymbol = Symbol<SymbolKind::Analytic>;

extern template class Symbol<SymbolKind::Hermitian>;
extern template class Symbol<SymbolKind::Analytic>;

/// A dense matrix on the truncated Fock space H_0 (+) H_1 (+) ... (+) H_depth,
/// H_k = H (x) (C^d)^{(x)k}. Rows are word-major (Fock order) with the H index
/// running fastest inside each word.
class LevelBlockMatrix {
 public:
  LevelBlockMatrix(int d, Index h_dim, int depth, MatrixXc matrix);

  int alphabet() const noexcept { return d_; }
  Index h_dim() const noexcept { return h_; }
  int depth() const noexcept { return depth_; }
  const MatrixXc& matrix() const noexcept { return matrix_; }
  MatrixXc& matrix() noexcept { return matrix_; }

  Index level_offset(int k) const;
  Index level_dim(int k) const;
  Index word_offset(const Word& w) const;

  auto level_block(int i, int j) const {
    return matrix_.block(level_offset(i), level_offset(j), level_dim(i), level_dim(j));
  }
  auto level_block(int i, int j) {
    return matrix_.block(level_offset(i), level_offset(j), level_dim(i), level_dim(j));
  }
  auto word_block(const Word& r, const Word& c) const {
    return matrix_.block(word_offset(r), word_offset(c), h_, h_);
  }
  auto word_block(const Word& r, const Word& c) {
    return matrix_.block(word_offset(r), word_offset(c), h_, h_);
  }

  /// Leading principal part on levels 0..depth.
  LevelBlockMatrix leading(int depth) const;

 private:
  int d_;
  Index h_;
  int depth_;
  MatrixXc matrix_;
};

/// Truncation of T_Q to words of length <= depth.
LevelBlockMatrix assemble_truncated(const HermitianSymbol& Q, int depth,
                                    int max_depth = kDefaultMaxDepth);
/// Truncation of T_F: block F_x at (xc, c); lower triangular in levels.
LevelBlockMatrix assemble_analytic(const AnalyticSymbol& F, int depth,
                                   int max_depth = kDefaultMaxDepth);

struct ToeplitzCheck {
  bool ok = true;
  double max_violation = 0.0;
};

/// Checks block(ra, cb) = delta_ab block(r, c) for every in-range pair, and
/// that the level-0 row and column vanish beyond the degree.
ToeplitzCheck check_multi_toeplitz(const LevelBlockMatrix& T, int degree, double tol = 0.0);

/// Coefficients of T_F^* T_F: Q_v = sum_u F_u^* F_{uv}.
HermitianSymbol convolve_adjoint(const AnalyticSymbol& F);

/// max_v ||Q_v - (F^*F)_v||_F / max(1, ||Q_0||_F).
double residual(const HermitianSymbol& Q, const AnalyticSymbol& F);

/// Largest Frobenius norm over the h x h tiles of A - B.
double max_block_deviation(const MatrixXc& A, const MatrixXc& B, Index block);

}  // namespace ncfr
