#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ncfr/matrix_core.hpp"
#include "ncfr/symbol.hpp"

namespace ncfr {

/// Rows/columns retained by a Schur complement; the rest are eliminated.
struct Partition {
  std::vector<Index> keep;

  static Partition leading(Index count);
  /// Levels 0..m of a level-ordered matrix.
  static Partition levels(int d, Index h_dim, int m);

  /// keep (x) I_d under prefix-major ordering: index i becomes i*d + s.
  Partition tensor_identity(int d) const;

  std::vector<Index> complement(Index n) const;
  void validate(Index n) const;
};

struct SchurResult {
  MatrixXc S;
  /// ||G||_2 for B = A^{1/2} G C^{1/2}.
  double g_norm = 0.0;
  /// Retained rank of the eliminated block C.
  Index rank_used = 0;
};

/// S = A - B C^+ B^*, with A = M[keep, keep], B = M[keep, comp], C = M[comp, comp].
SchurResult schur_complement(const MatrixXc& M, const Partition& p, const Tolerances& tol);

/// A^{1/2} (I - G G^*) A^{1/2} with G = (A^{1/2})^+ B (C^{1/2})^+. Independent of
/// the direct formula above; used to cross-check it.
MatrixXc schur_contraction_form(const MatrixXc& M, const Partition& p, const Tolerances& tol,
                                MatrixXc* G = nullptr);

/// <S f, f> <= <M (f (+) g), (f (+) g)> for every sample g, and equality at the
/// minimizer g* = -C^+ B^* f.
bool schur_variational_bound(const MatrixXc& M, const Partition& p, const VectorXc& f,
                             const std::vector<VectorXc>& g_samples, const Tolerances& tol);

/// ||S(M (x) I_d, p (x) I_d) - S(M, p) (x) I_d||_F.
double schur_tensor_check(const MatrixXc& M, const Partition& p, int d, const Tolerances& tol);

struct TraceEntry {
  int depth = 0;
  /// ||S_{N-1} - S_N||_F / ||S_{N-1}||_F.
  double diff_rel = 0.0;
  /// Smallest eigenvalue of S_N.
  double min_eig = 0.0;
  /// Smallest eigenvalue of S_{N-1} - S_N; should be >= 0 up to slack.
  double monotone_gap = 0.0;
};

using ConvergenceTrace = std::vector<TraceEntry>;

struct InfiniteSchur {
  int d = 1;
  Index h_dim = 1;
  int m = 0;
  /// S(m) of the deepest truncation visited; g_norm/rank_used describe the
  /// last level-peeling elimination.
  SchurResult result;
  ConvergenceTrace trace;
  bool converged = false;
  bool monotone = true;
  int depth = 0;
  std::vector<std::string> warnings;

  LevelBlockMatrix levels() const { return LevelBlockMatrix(d, h_dim, m, result.S); }
};

/// Depth cap used when the caller gives none. Level peeling keeps memory
/// independent of depth, so the cap only bounds run time on symbols whose
/// truncations converge slowly (e.g. zeros close to the boundary).
int default_depth_cap(int m);

/// Schur complement of T_Q supported on levels 0..m, as the limit over
/// truncation depths N of S(assemble_truncated(Q, N); levels 0..m).
///
/// The truncations are not materialized. With K = max(m, degree), the
/// truncation at depth N restricted to levels >= 1 is the depth N-1 truncation
/// tensored with I_d, and level 0 only couples to levels 1..degree, so
///   S_N(K) = [[Q_0, B^*], [B, S_{N-1}(K-1) (x) I_d]],  S_{N-1}(K-1) = S(S_{N-1}(K); K-1)
/// starting from S_K(K) = assemble_truncated(Q, K). Each step costs one
/// elimination of a single level, independent of N.
///
/// Throws NotPositiveAtDepth when a visited truncation is not PSD.
InfiniteSchur schur_of_infinite(const HermitianSymbol& Q, int m, const Tolerances& tol,
                                std::optional<int> depth_cap = std::nullopt);

/// Reference route: S(assemble_truncated(Q, depth); levels 0..m) built densely.
MatrixXc truncated_schur(const HermitianSymbol& Q, int depth, int m, const Tolerances& tol);

}  // namespace ncfr
