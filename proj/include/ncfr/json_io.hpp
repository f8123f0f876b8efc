#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "ncfr/factor.hpp"
#include "ncfr/schur.hpp"
#include "ncfr/symbol.hpp"

namespace ncfr {

using json = nlohmann::json;

/// [re, im]; a bare number is accepted on input as a real scalar.
json complex_to_json(cplx z);
cplx complex_from_json(const json& j);

/// Array of rows of complex scalars.
json matrix_to_json(const MatrixXc& M);
MatrixXc matrix_from_json(const json& j, Index rows, Index cols);

/// { "d", "n", "h_dim", "coefficients": { <word>: <matrix> } }
template <SymbolKind Kind>
json symbol_to_json(const Symbol<Kind>& X);

template <SymbolKind Kind>
struct LoadedSymbol {
  Symbol<Kind> symbol;
  std::vector<std::string> warnings;
};

/// Parses a symbol document. Unknown keys, bad shapes and over-long words are
/// rejected with a Parse/ShapeMismatch error. Hermitian symbols get Q_0
/// replaced by its Hermitian part, with a warning above 1e-12 relative.
template <SymbolKind Kind>
LoadedSymbol<Kind> symbol_from_json(const json& j);

json tolerances_to_json(const Tolerances& tol);
json trace_to_json(const ConvergenceTrace& trace);
json report_to_json(const FactorizationReport& report);

json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);

}  // namespace ncfr
