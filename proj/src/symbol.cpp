#include "ncfr/symbol.hpp"

#include <algorithm>

namespace ncfr {

template <SymbolKind Kind>
Symbol<Kind>::Symbol(int d, int degree, Index h_dim) : shape_{d, degree, h_dim} {
  if (d < 1) throw Error(ErrorKind::Config, "alphabet size must be positive");
  if (degree < 0) throw Error(ErrorKind::Config, "degree must be non-negative");
  if (h_dim < 1) throw Error(ErrorKind::Config, "h_dim must be positive");
}

template <SymbolKind Kind>
double Symbol<Kind>::set(const Word& v, const MatrixXc& value) {
  if (v.alphabet() != shape_.d) {
    throw Error(ErrorKind::AlphabetMismatch, "coefficient word " + v.to_string() +
                                                 " is over a different alphabet");
  }
  if (v.size() > shape_.degree) {
    throw Error(ErrorKind::ShapeMismatch, "word '" + v.to_string() + "' longer than degree " +
                                              std::to_string(shape_.degree));
  }
  if (value.rows() != shape_.h_dim || value.cols() != shape_.h_dim) {
    throw Error(ErrorKind::ShapeMismatch,
                "coefficient '" + v.to_string() + "' is " + std::to_string(value.rows()) + "x" +
                    std::to_string(value.cols()) + ", expected " + std::to_string(shape_.h_dim) +
                    "x" + std::to_string(shape_.h_dim));
  }
  double adjustment = 0.0;
  if constexpr (Kind == SymbolKind::Hermitian) {
    if (v.empty()) {
      MatrixXc sym = (value + value.adjoint()) / 2;
      adjustment = (sym - value).norm() / std::max(1.0, value.norm());
      coeffs_.insert_or_assign(v, std::move(sym));
      return adjustment;
    }
  }
  coeffs_.insert_or_assign(v, value);
  return adjustment;
}

template <SymbolKind Kind>
const MatrixXc* Symbol<Kind>::find(const Word& v) const {
  auto it = coeffs_.find(v);
  return it == coeffs_.end() ? nullptr : &it->second;
}

template <SymbolKind Kind>
MatrixXc Symbol<Kind>::coeff(const Word& v) const {
  if (const MatrixXc* m = find(v)) return *m;
  return MatrixXc::Zero(shape_.h_dim, shape_.h_dim);
}

template <SymbolKind Kind>
MatrixXc Symbol<Kind>::level_stack(int k) const {
  const Index h = shape_.h_dim;
  MatrixXc out = MatrixXc::Zero(h * level_size(shape_.d, k), h);
  for (const auto& [w, m] : coeffs_) {
    if (w.size() != k) continue;
    out.block(level_index(w).offset * h, 0, h, h) = m;
  }
  return out;
}

template <SymbolKind Kind>
bool Symbol<Kind>::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [](const auto& kv) { return kv.second.isZero(0.0); });
}

template class Symbol<SymbolKind::Hermitian>;
template class Symbol<SymbolKind::Analytic>;

LevelBlockMatrix::LevelBlockMatrix(int d, Index h_dim, int depth, MatrixXc matrix)
    : d_(d), h_(h_dim), depth_(depth), matrix_(std::move(matrix)) {
  const Index n = h_ * words_up_to(d_, depth_);
  if (matrix_.rows() != n || matrix_.cols() != n) {
    throw Error(ErrorKind::ShapeMismatch, "level matrix must be " + std::to_string(n) +
                                              " square for depth " + std::to_string(depth_));
  }
}

Index LevelBlockMatrix::level_offset(int k) const {
  return k == 0 ? 0 : h_ * words_up_to(d_, k - 1);
}

Index LevelBlockMatrix::level_dim(int k) const { return h_ * level_size(d_, k); }

Index LevelBlockMatrix::word_offset(const Word& w) const { return h_ * global_index(w); }

LevelBlockMatrix LevelBlockMatrix::leading(int depth) const {
  const Index n = h_ * words_up_to(d_, depth);
  return LevelBlockMatrix(d_, h_, depth, matrix_.topLeftCorner(n, n));
}

namespace {

template <SymbolKind Kind>
LevelBlockMatrix assemble(const Symbol<Kind>& X, int depth, int max_depth, bool with_adjoint) {
  if (depth < 0 || depth > max_depth) {
    throw Error(ErrorKind::Config, "truncation depth " + std::to_string(depth) +
                                       " outside [0, " + std::to_string(max_depth) + "]");
  }
  const int d = X.alphabet();
  const Index h = X.h_dim();
  const Index words = words_up_to(d, depth);
  MatrixXc T = MatrixXc::Zero(h * words, h * words);
  for (int level = 0; level <= depth; ++level) {
    const Index base = level == 0 ? 0 : words_up_to(d, level - 1);
    const Index count = level_size(d, level);
    for (const auto& [x, coeff] : X.coefficients()) {
      const int target = level + x.size();
      if (target > depth) continue;
      // Row word x.c sits at offset(x) * d^|c| + offset(c) inside its level.
      const Index row_base = (target == 0 ? 0 : words_up_to(d, target - 1)) +
                             level_index(x).offset * count;
      for (Index c = 0; c < count; ++c) {
        const Index col = h * (base + c);
        const Index row = h * (row_base + c);
        T.block(row, col, h, h) = coeff;
        if (with_adjoint && !x.empty()) T.block(col, row, h, h) = coeff.adjoint();
      }
    }
  }
  return LevelBlockMatrix(d, h, depth, std::move(T));
}

}  // namespace

LevelBlockMatrix assemble_truncated(const HermitianSymbol& Q, int depth, int max_depth) {
  if (depth < Q.degree()) {
    throw Error(ErrorKind::Config, "truncation depth below symbol degree");
  }
  return assemble(Q, depth, max_depth, true);
}

LevelBlockMatrix assemble_analytic(const AnalyticSymbol& F, int depth, int max_depth) {
  return assemble(F, depth, max_depth, false);
}

ToeplitzCheck check_multi_toeplitz(const LevelBlockMatrix& T, int degree, double tol) {
  const int d = T.alphabet();
  const Index h = T.h_dim();
  const int depth = T.depth();
  double worst = 0.0;

  // block(ra, cb) against delta_ab block(r, c), with |r|, |c| <= depth - 1.
  for (int lr = 0; lr < depth; ++lr) {
    for (int lc = 0; lc < depth; ++lc) {
      const Index nr = level_size(d, lr);
      const Index nc = level_size(d, lc);
      const Index r0 = T.level_offset(lr), c0 = T.level_offset(lc);
      const Index ra0 = T.level_offset(lr + 1), cb0 = T.level_offset(lc + 1);
      for (Index r = 0; r < nr; ++r) {
        for (Index c = 0; c < nc; ++c) {
          const auto base = T.matrix().block(r0 + r * h, c0 + c * h, h, h);
          for (int a = 0; a < d; ++a) {
            for (int b = 0; b < d; ++b) {
              const auto ext = T.matrix().block(ra0 + (r * d + a) * h, cb0 + (c * d + b) * h, h, h);
              const double v = a == b ? (ext - base).norm() : ext.norm();
              worst = std::max(worst, v);
            }
          }
        }
      }
    }
  }
  // Level-0 row and column beyond the degree.
  for (int k = degree + 1; k <= depth; ++k) {
    worst = std::max(worst, static_cast<double>(T.level_block(k, 0).norm()));
    worst = std::max(worst, static_cast<double>(T.level_block(0, k).norm()));
  }
  return {worst <= tol, worst};
}

HermitianSymbol convolve_adjoint(const AnalyticSymbol& F) {
  HermitianSymbol Q(F.shape());
  std::map<Word, MatrixXc> acc;
  for (const auto& [u, Fu] : F.coefficients()) {
    for (const auto& [w, Fw] : F.coefficients()) {
      const auto rel = relate(u, w);
      if (std::holds_alternative<Equal>(rel)) {
        auto [it, fresh] = acc.try_emplace(Word(F.alphabet()), MatrixXc::Zero(F.h_dim(), F.h_dim()));
        it->second.noalias() += Fu.adjoint() * Fw;
      } else if (const auto* ext = std::get_if<RightExtension>(&rel)) {
        auto [it, fresh] = acc.try_emplace(ext->x, MatrixXc::Zero(F.h_dim(), F.h_dim()));
        it->second.noalias() += Fu.adjoint() * Fw;
      }
    }
  }
  for (const auto& [v, m] : acc) Q.set(v, m);
  return Q;
}

double residual(const HermitianSymbol& Q, const AnalyticSymbol& F) {
  if (!(Q.shape() == F.shape())) {
    throw Error(ErrorKind::ShapeMismatch, "symbol shapes differ (d, degree, h_dim)");
  }
  const HermitianSymbol P = convolve_adjoint(F);
  double worst = 0.0;
  for (const auto& [v, m] : Q.coefficients()) worst = std::max(worst, (m - P.coeff(v)).norm());
  for (const auto& [v, m] : P.coefficients()) {
    if (!Q.find(v)) worst = std::max(worst, m.norm());
  }
  return worst / std::max(1.0, Q.coeff(Word(Q.alphabet())).norm());
}

double max_block_deviation(const MatrixXc& A, const MatrixXc& B, Index block) {
  if (A.rows() != B.rows() || A.cols() != B.cols()) {
    throw Error(ErrorKind::ShapeMismatch, "max_block_deviation: shapes differ");
  }
  double worst = 0.0;
  for (Index r = 0; r < A.rows(); r += block) {
    for (Index c = 0; c < A.cols(); c += block) {
      worst = std::max(worst, static_cast<double>(
                                  (A.block(r, c, block, block) - B.block(r, c, block, block)).norm()));
    }
  }
  return worst;
}

}  // namespace ncfr
