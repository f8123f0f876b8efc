#include "ncfr/json_io.hpp"

#include <cmath>
#include <fstream>

namespace ncfr {

namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorKind::Parse, what); }

int read_int(const json& doc, const char* key, int min_value) {
  if (!doc.contains(key)) parse_error(std::string("missing key '") + key + "'");
  const json& v = doc.at(key);
  if (!v.is_number_integer()) parse_error(std::string("'") + key + "' must be an integer");
  const auto x = v.get<long long>();
  if (x < min_value || x > 1'000'000) {
    parse_error(std::string("'") + key + "' out of range: " + std::to_string(x));
  }
  return static_cast<int>(x);
}

double finite(double x) {
  if (!std::isfinite(x)) parse_error("non-finite number in document");
  return x;
}

}  // namespace

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j) {
  if (j.is_number()) return {finite(j.get<double>()), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {finite(j[0].get<double>()), finite(j[1].get<double>())};
  }
  parse_error("complex scalar must be a number or [re, im], got " + j.dump());
}

json matrix_to_json(const MatrixXc& M) {
  json rows = json::array();
  for (Index r = 0; r < M.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < M.cols(); ++c) row.push_back(complex_to_json(M(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

MatrixXc matrix_from_json(const json& j, Index rows, Index cols) {
  if (!j.is_array() || static_cast<Index>(j.size()) != rows) {
    throw Error(ErrorKind::ShapeMismatch, "matrix must have " + std::to_string(rows) + " rows");
  }
  MatrixXc M(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
      throw Error(ErrorKind::ShapeMismatch, "matrix row must have " + std::to_string(cols) + " entries");
    }
    for (Index c = 0; c < cols; ++c) M(r, c) = complex_from_json(row[static_cast<std::size_t>(c)]);
  }
  return M;
}

template <SymbolKind Kind>
json symbol_to_json(const Symbol<Kind>& X) {
  json coeffs = json::object();
  for (const auto& [w, m] : X.coefficients()) coeffs[w.to_string()] = matrix_to_json(m);
  return json{{"d", X.alphabet()}, {"n", X.degree()}, {"h_dim", X.h_dim()}, {"coefficients", coeffs}};
}

template <SymbolKind Kind>
LoadedSymbol<Kind> symbol_from_json(const json& doc) {
  if (!doc.is_object()) parse_error("symbol document must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "d" && key != "n" && key != "h_dim" && key != "coefficients") {
      parse_error("unknown key '" + key + "'");
    }
  }
  const int d = read_int(doc, "d", 1);
  const int n = read_int(doc, "n", 0);
  const int h = read_int(doc, "h_dim", 1);
  if (!doc.contains("coefficients") || !doc.at("coefficients").is_object()) {
    parse_error("'coefficients' must be an object");
  }
  LoadedSymbol<Kind> out{Symbol<Kind>(d, n, h), {}};
  for (const auto& [key, value] : doc.at("coefficients").items()) {
    const Word w = Word::parse(key, d);
    if (out.symbol.find(w)) parse_error("word '" + w.to_string() + "' given twice");
    const double adjust = out.symbol.set(w, matrix_from_json(value, h, h));
    if (adjust > 1e-12) {
      out.warnings.push_back("constant coefficient was not Hermitian; replaced by its Hermitian part "
                             "(relative change " + std::to_string(adjust) + ")");
    }
  }
  return out;
}

template json symbol_to_json(const HermitianSymbol&);
template json symbol_to_json(const AnalyticSymbol&);
template LoadedSymbol<SymbolKind::Hermitian> symbol_from_json(const json&);
template LoadedSymbol<SymbolKind::Analytic> symbol_from_json(const json&);

json tolerances_to_json(const Tolerances& tol) {
  return json{{"rank_rel_tol", tol.rank_rel}, {"psd_rel_tol", tol.psd_rel}, {"conv_rel_tol", tol.conv_rel}};
}

json trace_to_json(const ConvergenceTrace& trace) {
  json out = json::array();
  for (const auto& e : trace) {
    json diff = std::isfinite(e.diff_rel) ? json(e.diff_rel) : json(nullptr);
    out.push_back(json{{"depth", e.depth}, {"diff_rel", diff}, {"min_eig", e.min_eig}});
  }
  return out;
}

json report_to_json(const FactorizationReport& report) {
  return json{{"factor", symbol_to_json(report.F)},
              {"residual", report.residual},
              {"trace", trace_to_json(report.trace)},
              {"warnings", report.warnings},
              {"tolerances", tolerances_to_json(report.tolerances)}};
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) parse_error("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    parse_error(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Config, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace ncfr
