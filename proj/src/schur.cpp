#include "ncfr/schur.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ncfr {

Partition Partition::leading(Index count) {
  Partition p;
  p.keep.resize(static_cast<std::size_t>(count));
  std::iota(p.keep.begin(), p.keep.end(), Index{0});
  return p;
}

Partition Partition::levels(int d, Index h_dim, int m) {
  return leading(h_dim * words_up_to(d, m));
}

Partition Partition::tensor_identity(int d) const {
  Partition p;
  p.keep.reserve(keep.size() * static_cast<std::size_t>(d));
  for (Index i : keep) {
    for (int s = 0; s < d; ++s) p.keep.push_back(i * d + s);
  }
  return p;
}

std::vector<Index> Partition::complement(Index n) const {
  std::vector<bool> kept(static_cast<std::size_t>(n), false);
  for (Index i : keep) kept[static_cast<std::size_t>(i)] = true;
  std::vector<Index> out;
  for (Index i = 0; i < n; ++i) {
    if (!kept[static_cast<std::size_t>(i)]) out.push_back(i);
  }
  return out;
}

void Partition::validate(Index n) const {
  if (keep.empty()) throw Error(ErrorKind::Config, "partition keeps no indices");
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (Index i : keep) {
    if (i < 0 || i >= n) throw Error(ErrorKind::Config, "partition index out of range");
    if (seen[static_cast<std::size_t>(i)]) throw Error(ErrorKind::Config, "partition repeats an index");
    seen[static_cast<std::size_t>(i)] = true;
  }
}

namespace {

void require_psd(const MatrixXc& M, const Tolerances& tol, const char* what) {
  require_hermitian(M, what);
  const PsdReport rep = is_psd(M, tol);
  if (!rep.psd) {
    throw Error(ErrorKind::NotPositive,
                std::string(what) + ": minimum eigenvalue " + std::to_string(rep.min_eigenvalue));
  }
}

double operator_norm(const MatrixXc& G) {
  if (G.size() == 0) return 0.0;
  Eigen::BDCSVD<MatrixXc> svd(G);
  return svd.singularValues()(0);
}

/// Direct formula without the PSD precondition check.
SchurResult schur_unchecked(const MatrixXc& M, const std::vector<Index>& keep,
                            const std::vector<Index>& comp, const Tolerances& tol,
                            bool with_contraction) {
  SchurResult out;
  MatrixXc A = M(keep, keep);
  if (comp.empty()) {
    out.S = std::move(A);
    return out;
  }
  const MatrixXc B = M(keep, comp);
  const MatrixXc C = M(comp, comp);

  const auto es = hermitian_eig(C);
  const double top = std::max(0.0, es.eigenvalues().maxCoeff());
  const double cutoff = tol.rank_rel * top;
  const auto retained = [cutoff](double x) { return x > cutoff && x > 0.0; };
  const MatrixXc c_pinv =
      spectral_apply(es, [&](double x) { return retained(x) ? 1.0 / x : 0.0; });
  out.rank_used = es.eigenvalues().unaryExpr([&](double x) { return retained(x) ? 1.0 : 0.0; }).sum();

  MatrixXc S = A - B * c_pinv * B.adjoint();
  out.S = (S + S.adjoint()) / 2;

  if (with_contraction) {
    const MatrixXc c_isqrt =
        spectral_apply(es, [&](double x) { return retained(x) ? 1.0 / std::sqrt(x) : 0.0; });
    const MatrixXc G = psd_power(A, -0.5, tol) * B * c_isqrt;
    out.g_norm = operator_norm(G);
  }
  return out;
}

double min_eigenvalue(const MatrixXc& M) {
  if (M.rows() == 0) return 0.0;
  return hermitian_eig(M).eigenvalues()(0);
}

}  // namespace

SchurResult schur_complement(const MatrixXc& M, const Partition& p, const Tolerances& tol) {
  tol.validate();
  require_square(M, "schur_complement");
  p.validate(M.rows());
  require_psd(M, tol, "schur_complement");
  return schur_unchecked(M, p.keep, p.complement(M.rows()), tol, true);
}

MatrixXc schur_contraction_form(const MatrixXc& M, const Partition& p, const Tolerances& tol,
                                MatrixXc* G_out) {
  tol.validate();
  require_square(M, "schur_contraction_form");
  p.validate(M.rows());
  require_psd(M, tol, "schur_contraction_form");
  const auto comp = p.complement(M.rows());
  const MatrixXc A = M(p.keep, p.keep);
  if (comp.empty()) {
    if (G_out) *G_out = MatrixXc::Zero(A.rows(), 0);
    return A;
  }
  const MatrixXc B = M(p.keep, comp);
  const MatrixXc C = M(comp, comp);
  const MatrixXc a_half = hermitian_sqrt(A, tol);
  const MatrixXc G = psd_power(A, -0.5, tol) * B * psd_power(C, -0.5, tol);
  const MatrixXc I = MatrixXc::Identity(A.rows(), A.rows());
  MatrixXc S = a_half * (I - G * G.adjoint()) * a_half;
  if (G_out) *G_out = G;
  return (S + S.adjoint()) / 2;
}

bool schur_variational_bound(const MatrixXc& M, const Partition& p, const VectorXc& f,
                             const std::vector<VectorXc>& g_samples, const Tolerances& tol) {
  const auto comp = p.complement(M.rows());
  if (f.size() != static_cast<Index>(p.keep.size())) {
    throw Error(ErrorKind::ShapeMismatch, "variational bound: f does not match the kept block");
  }
  const SchurResult sr = schur_complement(M, p, tol);
  const double slack = 1e-12 * (1.0 + M.norm());
  const double sff = std::real(f.dot(sr.S * f));

  const MatrixXc B = M(p.keep, comp);
  const MatrixXc C = M(comp, comp);
  auto quad = [&](const VectorXc& g) {
    VectorXc x(M.rows());
    x(p.keep) = f;
    x(comp) = g;
    return std::real(x.dot(M * x));
  };
  for (const auto& g : g_samples) {
    if (g.size() != static_cast<Index>(comp.size())) {
      throw Error(ErrorKind::ShapeMismatch, "variational bound: g does not match the complement");
    }
    if (sff > quad(g) + slack) return false;
  }
  if (comp.empty()) return true;
  const VectorXc g_star = -(psd_power(C, -1.0, tol) * (B.adjoint() * f));
  return std::abs(quad(g_star) - sff) <= slack;
}

double schur_tensor_check(const MatrixXc& M, const Partition& p, int d, const Tolerances& tol) {
  const MatrixXc big = embed_with_identity(M, d, 1);
  const SchurResult lhs = schur_complement(big, p.tensor_identity(d), tol);
  const SchurResult rhs = schur_complement(M, p, tol);
  return (lhs.S - embed_with_identity(rhs.S, d, 1)).norm();
}

int default_depth_cap(int m) { return m + 50000; }

namespace {
constexpr double kRoundoffFloor = 1e-14;
constexpr int kMinConfirmWindow = 8;
}  // namespace

InfiniteSchur schur_of_infinite(const HermitianSymbol& Q, int m, const Tolerances& tol,
                                std::optional<int> depth_cap) {
  tol.validate();
  if (m < 0) throw Error(ErrorKind::Config, "support level must be non-negative");
  const int d = Q.alphabet();
  const Index h = Q.h_dim();
  const int K = std::max(m, Q.degree());
  const int cap = depth_cap.value_or(default_depth_cap(m));
  if (cap < K + 1) {
    throw Error(ErrorKind::Config, "depth cap " + std::to_string(cap) + " below " +
                                       std::to_string(K + 1));
  }

  InfiniteSchur out;
  out.d = d;
  out.h_dim = h;
  out.m = m;

  const Index dim_m = h * words_up_to(d, m);
  const Index dim_k = h * words_up_to(d, K);
  const Index dim_inner = K == 0 ? 0 : h * words_up_to(d, K - 1);
  const std::vector<Index> keep_m = Partition::leading(dim_m).keep;
  const std::vector<Index> keep_inner = Partition::leading(dim_inner).keep;
  std::vector<Index> peel(static_cast<std::size_t>(dim_k - dim_inner));
  std::iota(peel.begin(), peel.end(), dim_inner);

  auto check_depth = [&](const MatrixXc& S, int N) {
    const PsdReport rep = is_psd(S, tol);
    if (!rep.psd) throw NotPositiveAtDepth(N, rep.min_eigenvalue);
  };
  auto restrict_to_m = [&](const MatrixXc& S) {
    if (m == K) return S;
    return schur_unchecked(S, keep_m, Partition::leading(dim_m).complement(dim_k), tol, false).S;
  };

  MatrixXc S = assemble_truncated(Q, K, std::max(K, kDefaultMaxDepth)).matrix();
  check_depth(S, K);
  const MatrixXc q0 = S.topLeftCorner(h, h);
  const MatrixXc col = S.bottomLeftCorner(dim_k - h, h);
  MatrixXc current = restrict_to_m(S);
  out.depth = K;

  double prev_diff = 0.0;
  MatrixXc checkpoint;
  int checkpoint_depth = 0;
  for (int N = K + 1; N <= cap; ++N) {
    MatrixXc next_full;
    if (K == 0) {
      next_full = S;
    } else {
      const SchurResult peeled = schur_unchecked(S, keep_inner, peel, tol, true);
      out.result.g_norm = peeled.g_norm;
      out.result.rank_used = peeled.rank_used;
      next_full.resize(dim_k, dim_k);
      next_full.topLeftCorner(h, h) = q0;
      next_full.bottomLeftCorner(dim_k - h, h) = col;
      next_full.topRightCorner(h, dim_k - h) = col.adjoint();
      next_full.bottomRightCorner(dim_k - h, dim_k - h) = embed_with_identity(peeled.S, d, 1, h);
      check_depth(next_full, N);
    }
    MatrixXc next = restrict_to_m(next_full);

    const double scale = current.norm();
    const MatrixXc delta = current - next;
    const double diff = delta.norm();
    TraceEntry entry;
    entry.depth = N;
    entry.diff_rel = scale > 0.0 ? diff / scale : (diff > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    entry.min_eig = min_eigenvalue(next);
    entry.monotone_gap = min_eigenvalue(delta);
    out.trace.push_back(entry);
    if (entry.monotone_gap < -tol.psd_rel * std::max(scale, std::numeric_limits<double>::min()) &&
        out.monotone) {
      out.monotone = false;
      out.warnings.push_back("truncation sequence not monotone at depth " + std::to_string(N));
    }

    const bool fixed_point = next_full == S;
    S = std::move(next_full);
    current = std::move(next);
    out.depth = N;
    if (fixed_point) {
      out.converged = true;
      break;
    }
    // Successive differences shrink geometrically, so the distance to the
    // limit is about diff * r / (1 - r) with r the last contraction ratio.
    const double ratio = prev_diff > 0.0 ? diff / prev_diff : 0.0;
    const double tail = ratio < 1.0 ? diff * ratio / (1.0 - ratio) : std::numeric_limits<double>::infinity();
    const double threshold = tol.conv_rel * scale;
    prev_diff = diff;
    const bool step_ok = diff <= threshold && (tail <= threshold || diff <= kRoundoffFloor * scale);

    // Oscillating modes can make a single step look converged. The sequence
    // is PSD-decreasing, so ||S_c - S_N|| only grows with N: confirm by
    // measuring the total change over a window after the passing depth c.
    const int window = std::max(kMinConfirmWindow, checkpoint_depth / 4);
    if (checkpoint_depth > 0 && (N >= checkpoint_depth + window || N == cap)) {
      if ((checkpoint - current).norm() <= threshold) {
        out.converged = true;
        break;
      }
      checkpoint_depth = 0;
    }
    if (checkpoint_depth == 0 && step_ok) {
      checkpoint = current;
      checkpoint_depth = N;
    }
  }
  if (!out.converged) {
    out.warnings.push_back("no convergence by depth " + std::to_string(cap) + " (last relative step " +
                           std::to_string(out.trace.empty() ? 0.0 : out.trace.back().diff_rel) + ")");
  }
  out.result.S = std::move(current);
  return out;
}

MatrixXc truncated_schur(const HermitianSymbol& Q, int depth, int m, const Tolerances& tol) {
  const LevelBlockMatrix T = assemble_truncated(Q, depth);
  return schur_complement(T.matrix(), Partition::levels(Q.alphabet(), Q.h_dim(), m), tol).S;
}

}  // namespace ncfr
