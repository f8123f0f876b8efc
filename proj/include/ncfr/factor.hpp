#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ncfr/schur.hpp"
#include "ncfr/symbol.hpp"

namespace ncfr {

/// Deviations of a computed S(m) from the level recurrence
///   S(m) = [[A, B^*], [B, S(m-1) (x) I_d]],
/// relative to max(1, ||S(m)||_F).
struct RecursionDeviation {
  double lower_right = 0.0;
  /// Only when m >= degree: A against Q_0 and B against col(Q_i).
  std::optional<double> top_left;
  std::optional<double> first_column;
  InfiniteSchur current;
  InfiniteSchur previous;
};

RecursionDeviation verify_recursion(const HermitianSymbol& Q, int m, const Tolerances& tol,
                                    std::optional<int> depth_cap = std::nullopt);

/// S = L^* L with L lower triangular in levels and L_{i,j} = F_{i-j} (x) I_{d^j}.
struct TriangularFactor {
  int d = 1;
  Index h_dim = 1;
  int m = 0;
  /// Full lower-block-triangular factor on levels 0..m.
  MatrixXc L;
  /// F_k = col(F_v)_{|v| = k}, each (h_dim d^k) x h_dim.
  std::vector<MatrixXc> generators;
  /// Before enforcement: max_{i,j} ||L_{i,j} - F_{i-j} (x) I_{d^j}||_F / max(1, ||L||_F).
  double structure_deviation = 0.0;
  /// Same, restricted to the diagonal blocks L_{k,k} against F_0 (x) I_{d^k}.
  double diagonal_deviation = 0.0;
  /// ||S - L^* L||_F after enforcement.
  double reconstruction_error = 0.0;
  /// Largest relative residual of the pseudoinverse solves.
  double solve_residual = 0.0;
  /// max ||(I - P) L_{i,j}||_F / max(1, ||L||_F), P the projector onto ran L_{i,i}.
  double range_deviation = 0.0;

  LevelBlockMatrix levels() const { return LevelBlockMatrix(d, h_dim, m, L); }
  auto block(int i, int j) const {
    const Index ri = h_dim * (i == 0 ? 0 : words_up_to(d, i - 1));
    const Index cj = h_dim * (j == 0 ? 0 : words_up_to(d, j - 1));
    return L.block(ri, cj, h_dim * level_size(d, i), h_dim * level_size(d, j));
  }
};

/// Relative threshold on the solve residual and structure deviation.
inline constexpr double kStructureTol = 1e-6;

/// Eliminates the last level first: L_{m,m} = S_{m,m}^{1/2},
/// L_{m,j} = (L_{m,m}^*)^+ S_{m,j}, deflate, repeat on levels 0..m-1.
TriangularFactor reverse_block_cholesky(const LevelBlockMatrix& S, const Tolerances& tol);

struct FactorizationReport {
  AnalyticSymbol F{1, 0, 1};
  double residual = 0.0;
  ConvergenceTrace trace;
  Tolerances tolerances;
  std::vector<std::string> warnings;
  bool converged = true;
  /// Absent for degree-0 and zero symbols.
  std::optional<TriangularFactor> triangular;
};

FactorizationReport factorize(const HermitianSymbol& Q, const Tolerances& tol,
                              std::optional<int> depth_cap = std::nullopt);

struct VerificationReport {
  double coefficient_residual = 0.0;
  /// max over h x h tiles of assemble_truncated(Q, N) - [T_F^* T_F]_N, scaled
  /// like the coefficient residual.
  double matrix_residual = 0.0;
};

VerificationReport verify_factorization(const HermitianSymbol& Q, const AnalyticSymbol& F,
                                        int depth);

/// Compression of T_F(depth + degree)^* T_F(depth + degree) to levels 0..depth.
MatrixXc analytic_gram(const AnalyticSymbol& F, int depth);

}  // namespace ncfr
