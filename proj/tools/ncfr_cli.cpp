// ncfr: synthesize, factor and verify positive multi-Toeplitz operator polynomials.
//
// Exit codes: 0 success, 1 verification failed, 2 input error,
// 3 convergence warning, 4 positivity failure.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ncfr/factor.hpp"
#include "ncfr/json_io.hpp"
#include "ncfr/schur.hpp"
#include "ncfr/synth.hpp"

namespace {

using namespace ncfr;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitInput = 2;
constexpr int kExitConvergence = 3;
constexpr int kExitPositivity = 4;

constexpr double kAcceptResidual = 1e-6;

struct TolFlags {
  Tolerances tol;
  std::optional<int> depth_max;

  void attach(CLI::App* cmd) {
    auto positive = CLI::Range(std::numeric_limits<double>::min(), 1.0);
    cmd->add_option("--tol-rank", tol.rank_rel, "relative singular-value cutoff")
        ->check(positive)->capture_default_str();
    cmd->add_option("--tol-psd", tol.psd_rel, "relative negative-eigenvalue slack")
        ->check(positive)->capture_default_str();
    cmd->add_option("--tol-conv", tol.conv_rel, "truncation convergence threshold")
        ->check(positive)->capture_default_str();
    cmd->add_option("--depth-max", depth_max, "maximum truncation depth")->check(CLI::PositiveNumber);
  }
};

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

HermitianSymbol load_hermitian(const std::string& path) {
  auto loaded = symbol_from_json<SymbolKind::Hermitian>(read_json_file(path));
  print_warnings(loaded.warnings);
  return std::move(loaded.symbol);
}

// Also accepts a factor report, which carries the symbol under "factor".
AnalyticSymbol load_analytic(const std::string& path) {
  json doc = read_json_file(path);
  if (doc.is_object() && doc.contains("factor") && doc.contains("residual")) doc = doc.at("factor");
  return symbol_from_json<SymbolKind::Analytic>(doc).symbol;
}

int run_synth(const SynthParams& params, const std::string& prefix) {
  const AnalyticSymbol F = synth_analytic(params);
  const HermitianSymbol Q = convolve_adjoint(F);
  write_json_file(prefix + ".F.json", symbol_to_json(F));
  write_json_file(prefix + ".Q.json", symbol_to_json(Q));
  std::cout << "synth: wrote " << prefix << ".F.json and " << prefix << ".Q.json ("
            << F.coefficients().size() << " nonzero words)\n";
  return kExitOk;
}

int run_factor(const std::string& input, const std::string& output, const TolFlags& flags) {
  const HermitianSymbol Q = load_hermitian(input);
  const FactorizationReport report = factorize(Q, flags.tol, flags.depth_max);
  write_json_file(output, report_to_json(report));
  print_warnings(report.warnings);
  const int depth = report.trace.empty() ? 0 : report.trace.back().depth;
  std::cout << "factor: residual " << report.residual << " at depth " << depth
            << (report.converged ? "" : " (not converged)") << '\n';
  if (!report.converged || report.residual > kAcceptResidual) return kExitConvergence;
  return kExitOk;
}

int run_verify(const std::string& q_path, const std::string& f_path, std::optional<int> depth,
               const std::string& output) {
  const HermitianSymbol Q = load_hermitian(q_path);
  const AnalyticSymbol F = load_analytic(f_path);
  const VerificationReport rep = verify_factorization(Q, F, depth.value_or(Q.degree()));
  if (!output.empty()) {
    write_json_file(output, json{{"coefficient_residual", rep.coefficient_residual},
                                 {"matrix_residual", rep.matrix_residual}});
  }
  std::cout << "verify: coefficient residual " << rep.coefficient_residual << ", matrix residual "
            << rep.matrix_residual << '\n';
  return rep.coefficient_residual <= kAcceptResidual ? kExitOk : kExitVerifyFailed;
}

int run_schur(const std::string& input, int m, bool check_recursion, const std::string& output,
              const TolFlags& flags) {
  const HermitianSymbol Q = load_hermitian(input);
  const InfiniteSchur inf = schur_of_infinite(Q, m, flags.tol, flags.depth_max);
  const LevelBlockMatrix S = inf.levels();
  json levels = json::array();
  for (int k = 0; k <= m; ++k) {
    levels.push_back(json{{"level", k}, {"offset", S.level_offset(k)}, {"dim", S.level_dim(k)}});
  }
  json doc{{"d", inf.d},
           {"h_dim", inf.h_dim},
           {"m", m},
           {"levels", levels},
           {"S", matrix_to_json(inf.result.S)},
           {"converged", inf.converged},
           {"depth", inf.depth},
           {"trace", trace_to_json(inf.trace)},
           {"warnings", inf.warnings}};
  print_warnings(inf.warnings);
  std::cout << "schur: S(" << m << ") is " << inf.result.S.rows() << "x" << inf.result.S.cols()
            << ", depth " << inf.depth << (inf.converged ? "" : " (not converged)") << '\n';
  if (check_recursion && m >= 1) {
    const RecursionDeviation dev = verify_recursion(Q, m, flags.tol, flags.depth_max);
    json rec{{"lower_right", dev.lower_right}};
    std::cout << "recursion: lower-right deviation " << dev.lower_right;
    if (dev.top_left) {
      rec["top_left"] = *dev.top_left;
      rec["first_column"] = *dev.first_column;
      std::cout << ", top-left " << *dev.top_left << ", first column " << *dev.first_column;
    }
    std::cout << '\n';
    doc["recursion"] = rec;
  } else if (check_recursion) {
    std::cout << "recursion: nothing to check for m = 0\n";
  }
  if (!output.empty()) write_json_file(output, doc);
  return inf.converged ? kExitOk : kExitConvergence;
}

int run_check(const std::string& input, std::optional<int> depth, const TolFlags& flags) {
  const HermitianSymbol Q = load_hermitian(input);
  const int N = depth.value_or(Q.degree());
  const LevelBlockMatrix T = assemble_truncated(Q, N);
  const ToeplitzCheck toeplitz = check_multi_toeplitz(T, Q.degree());
  const PsdReport psd = is_psd(T.matrix(), flags.tol);
  std::cout << "check: depth " << N << ", multi-Toeplitz violation " << toeplitz.max_violation
            << ", min eigenvalue " << psd.min_eigenvalue << (psd.psd ? " (PSD)" : " (not PSD)") << '\n';
  if (!psd.psd) {
    std::cerr << "error: truncation at depth " << N << " is not positive semidefinite\n";
    return kExitPositivity;
  }
  return toeplitz.ok ? kExitOk : kExitInput;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Factor positive multi-Toeplitz operator polynomials T_Q = T_F^* T_F"};
  app.require_subcommand(1);

  SynthParams synth;
  std::string synth_out;
  auto* cmd_synth = app.add_subcommand("synth", "draw a random F and write F and Q = F^*F");
  cmd_synth->add_option("--d", synth.d, "alphabet size")->required()->check(CLI::PositiveNumber);
  cmd_synth->add_option("--n", synth.degree, "degree")->required()->check(CLI::NonNegativeNumber);
  cmd_synth->add_option("--h-dim", synth.h_dim, "coefficient dimension")->required()->check(CLI::PositiveNumber);
  cmd_synth->add_option("--seed", synth.seed, "PRNG seed")->capture_default_str();
  cmd_synth->add_option("--density", synth.density, "probability a word is nonzero")
      ->check(CLI::Range(std::numeric_limits<double>::min(), 1.0))->capture_default_str();
  cmd_synth->add_option("-o,--output", synth_out, "output prefix (writes PREFIX.F.json, PREFIX.Q.json)")
      ->required();

  std::string factor_in, factor_out;
  TolFlags factor_flags;
  auto* cmd_factor = app.add_subcommand("factor", "factor a Hermitian symbol");
  cmd_factor->add_option("input", factor_in, "Hermitian symbol JSON")->required();
  cmd_factor->add_option("-o,--output", factor_out, "report JSON")->required();
  factor_flags.attach(cmd_factor);

  std::string verify_q, verify_f, verify_out;
  std::optional<int> verify_depth;
  auto* cmd_verify = app.add_subcommand("verify", "check T_Q = T_F^* T_F");
  cmd_verify->add_option("q", verify_q, "Hermitian symbol JSON")->required();
  cmd_verify->add_option("f", verify_f, "analytic symbol JSON (or factor report)")->required();
  cmd_verify->add_option("--depth", verify_depth, "truncation depth (default: degree)")
      ->check(CLI::NonNegativeNumber);
  cmd_verify->add_option("-o,--output", verify_out, "residual JSON");

  std::string schur_in, schur_out;
  int schur_m = 0;
  bool check_recursion = false;
  TolFlags schur_flags;
  auto* cmd_schur = app.add_subcommand("schur", "Schur complement S(m) of T_Q");
  cmd_schur->add_option("input", schur_in, "Hermitian symbol JSON")->required();
  cmd_schur->add_option("--m", schur_m, "support levels 0..m")->required()->check(CLI::NonNegativeNumber);
  cmd_schur->add_flag("--check-recursion", check_recursion, "verify the level recurrence of S(m)");
  cmd_schur->add_option("-o,--output", schur_out, "S(m) and trace JSON");
  schur_flags.attach(cmd_schur);

  std::string check_in;
  std::optional<int> check_depth;
  TolFlags check_flags;
  auto* cmd_check = app.add_subcommand("check", "multi-Toeplitz structure and positivity of a truncation");
  cmd_check->add_option("input", check_in, "Hermitian symbol JSON")->required();
  cmd_check->add_option("--depth", check_depth, "truncation depth (default: degree)")
      ->check(CLI::NonNegativeNumber);
  check_flags.attach(cmd_check);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*cmd_synth) return run_synth(synth, synth_out);
    if (*cmd_factor) return run_factor(factor_in, factor_out, factor_flags);
    if (*cmd_verify) return run_verify(verify_q, verify_f, verify_depth, verify_out);
    if (*cmd_schur) return run_schur(schur_in, schur_m, check_recursion, schur_out, schur_flags);
    if (*cmd_check) return run_check(check_in, check_depth, check_flags);
  } catch (const NotPositiveAtDepth& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitPositivity;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::NotPositive: return kExitPositivity;
      case ErrorKind::StructureViolation: return kExitConvergence;
      default: return kExitInput;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}
