#include "ncfr/factor.hpp"

#include <algorithm>

namespace ncfr {

namespace {

Index level_start(int d, Index h, int k) { return k == 0 ? 0 : h * words_up_to(d, k - 1); }

}  // namespace

RecursionDeviation verify_recursion(const HermitianSymbol& Q, int m, const Tolerances& tol,
                                    std::optional<int> depth_cap) {
  if (m < 1) throw Error(ErrorKind::Config, "recursion check needs m >= 1");
  const int d = Q.alphabet();
  const Index h = Q.h_dim();
  RecursionDeviation out;
  out.current = schur_of_infinite(Q, m, tol, depth_cap);
  out.previous = schur_of_infinite(Q, m - 1, tol, depth_cap);

  const MatrixXc& S = out.current.result.S;
  const double scale = std::max(1.0, S.norm());
  const Index inner = S.rows() - h;
  const MatrixXc expected = embed_with_identity(out.previous.result.S, d, 1, h);
  out.lower_right = (S.bottomRightCorner(inner, inner) - expected).norm() / scale;

  if (m >= Q.degree()) {
    out.top_left = (S.topLeftCorner(h, h) - Q.coeff(Word(d))).norm() / scale;
    MatrixXc col = MatrixXc::Zero(inner, h);
    for (int k = 1; k <= Q.degree(); ++k) {
      const Index off = level_start(d, h, k) - h;
      col.block(off, 0, h * level_size(d, k), h) = Q.level_stack(k);
    }
    out.first_column = (S.bottomLeftCorner(inner, h) - col).norm() / scale;
  }
  return out;
}

TriangularFactor reverse_block_cholesky(const LevelBlockMatrix& S, const Tolerances& tol) {
  tol.validate();
  require_hermitian(S.matrix(), "reverse_block_cholesky");
  const int d = S.alphabet();
  const Index h = S.h_dim();
  const int m = S.depth();

  TriangularFactor out;
  out.d = d;
  out.h_dim = h;
  out.m = m;
  const Index n = S.matrix().rows();
  const double s_scale = std::max(1.0, S.matrix().norm());
  out.L = MatrixXc::Zero(n, n);
  MatrixXc work = S.matrix();

  for (int k = m; k >= 0; --k) {
    const Index off = level_start(d, h, k);
    const Index dim = h * level_size(d, k);
    const MatrixXc Skk = work.block(off, off, dim, dim);
    if (const PsdReport rep = is_psd(Skk, tol); !rep.psd) {
      throw Error(ErrorKind::NotPositive, "deflated level " + std::to_string(k) +
                                              " has minimum eigenvalue " +
                                              std::to_string(rep.min_eigenvalue));
    }
    const MatrixXc Lkk = hermitian_sqrt(Skk, tol);
    out.L.block(off, off, dim, dim) = Lkk;
    if (off == 0) continue;

    const MatrixXc R = work.block(off, 0, dim, off);
    const MatrixXc row = psd_power(Skk, -0.5, tol) * R;
    out.solve_residual = std::max(out.solve_residual, (Lkk * row - R).norm() / s_scale);
    out.L.block(off, 0, dim, off) = row;
    work.topLeftCorner(off, off).noalias() -= row.adjoint() * row;
  }

  for (int k = 0; k <= m; ++k) out.generators.push_back(out.block(k, 0));

  const double l_scale = std::max(1.0, out.L.norm());
  for (int i = 0; i <= m; ++i) {
    for (int j = 1; j <= i; ++j) {
      const double dev =
          (out.block(i, j) - embed_with_identity(out.generators[static_cast<std::size_t>(i - j)], d, j, h))
              .norm() /
          l_scale;
      out.structure_deviation = std::max(out.structure_deviation, dev);
      if (i == j) out.diagonal_deviation = std::max(out.diagonal_deviation, dev);
    }
  }
  if (out.solve_residual > kStructureTol) {
    throw Error(ErrorKind::StructureViolation,
                "pseudoinverse solve residual " + std::to_string(out.solve_residual));
  }
  if (out.structure_deviation > kStructureTol) {
    throw Error(ErrorKind::StructureViolation,
                "triangular factor deviates from F_{i-j} (x) I by " +
                    std::to_string(out.structure_deviation));
  }

  // Replace every block by its structured form.
  out.L.setZero();
  for (int i = 0; i <= m; ++i) {
    for (int j = 0; j <= i; ++j) {
      out.L.block(level_start(d, h, i), level_start(d, h, j), h * level_size(d, i), h * level_size(d, j)) =
          embed_with_identity(out.generators[static_cast<std::size_t>(i - j)], d, j, h);
    }
  }
  out.reconstruction_error = (S.matrix() - out.L.adjoint() * out.L).norm();

  const MatrixXc& F0 = out.generators.front();
  const MatrixXc P0 = psd_power(F0, -1.0, tol) * F0;
  for (int k = 1; k <= m; ++k) {
    const MatrixXc& Fk = out.generators[static_cast<std::size_t>(k)];
    const MatrixXc proj = embed_with_identity(P0, d, k, h);
    out.range_deviation = std::max(out.range_deviation, (Fk - proj * Fk).norm() / l_scale);
  }
  return out;
}

FactorizationReport factorize(const HermitianSymbol& Q, const Tolerances& tol,
                              std::optional<int> depth_cap) {
  tol.validate();
  const int d = Q.alphabet();
  const Index h = Q.h_dim();
  const int n = Q.degree();
  FactorizationReport report;
  report.F = AnalyticSymbol(Q.shape());
  report.tolerances = tol;

  if (Q.is_zero()) return report;

  if (n == 0) {
    const MatrixXc q0 = Q.coeff(Word(d));
    const PsdReport rep = is_psd(q0, tol);
    if (!rep.psd) throw NotPositiveAtDepth(0, rep.min_eigenvalue);
    report.F.set(Word(d), hermitian_sqrt(q0, tol));
    report.residual = residual(Q, report.F);
    return report;
  }

  InfiniteSchur inf = schur_of_infinite(Q, n, tol, depth_cap);
  report.trace = inf.trace;
  report.converged = inf.converged;
  report.warnings = inf.warnings;

  TriangularFactor tri = reverse_block_cholesky(inf.levels(), tol);
  for (int k = 0; k <= n; ++k) {
    const MatrixXc& stack = tri.generators[static_cast<std::size_t>(k)];
    for (Index off = 0; off < level_size(d, k); ++off) {
      report.F.set(word_at(d, k, off), stack.block(off * h, 0, h, h));
    }
  }
  report.triangular = std::move(tri);
  report.residual = residual(Q, report.F);
  return report;
}

MatrixXc analytic_gram(const AnalyticSymbol& F, int depth) {
  const LevelBlockMatrix TF = assemble_analytic(F, depth + F.degree());
  const Index n = F.h_dim() * words_up_to(F.alphabet(), depth);
  return (TF.matrix().adjoint() * TF.matrix().leftCols(n)).topRows(n);
}

VerificationReport verify_factorization(const HermitianSymbol& Q, const AnalyticSymbol& F,
                                        int depth) {
  if (!(Q.shape() == F.shape())) {
    throw Error(ErrorKind::ShapeMismatch, "symbol shapes differ (d, degree, h_dim)");
  }
  if (depth < Q.degree()) throw Error(ErrorKind::Config, "verification depth below degree");
  VerificationReport out;
  out.coefficient_residual = residual(Q, F);
  const MatrixXc lhs = assemble_truncated(Q, depth).matrix();
  const double scale = std::max(1.0, Q.coeff(Word(Q.alphabet())).norm());
  out.matrix_residual = max_block_deviation(lhs, analytic_gram(F, depth), Q.h_dim()) / scale;
  return out;
}

}  // namespace ncfr
