#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "ncfr/json_io.hpp"

#ifndef NCFR_CLI_PATH
#error "NCFR_CLI_PATH must name the ncfr executable"
#endif

using namespace ncfr;
namespace fs = std::filesystem;

namespace {

struct Sandbox {
  fs::path dir;
  Sandbox() : dir(fs::temp_directory_path() / "ncfr_cli_test") {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Sandbox() { fs::remove_all(dir); }

  std::string path(const std::string& name) const { return (dir / name).string(); }

  void write(const std::string& name, const std::string& text) const { std::ofstream(dir / name) << text; }

  std::string read(const std::string& name) const {
    std::ifstream in(dir / name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  /// Runs the CLI; stdout lands in `out`, stderr in `err`.
  int run(const std::string& args) const {
    const std::string cmd = std::string("\"") + NCFR_CLI_PATH + "\" " + args + " > \"" + path("out") +
                            "\" 2> \"" + path("err") + "\"";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
};

}  // namespace

TEST_CASE("synth is deterministic") {
  Sandbox box;
  const std::string args = "synth --d 2 --n 1 --h-dim 1 --seed 7 --density 1 -o ";
  REQUIRE(box.run(args + box.path("a")) == 0);
  REQUIRE(box.run(args + box.path("b")) == 0);
  CHECK(box.read("a.F.json") == box.read("b.F.json"));
  CHECK(box.read("a.Q.json") == box.read("b.Q.json"));

  REQUIRE(box.run("synth --d 1 --n 0 --h-dim 2 --seed 3 -o " + box.path("c")) == 0);
  const json q = read_json_file(box.path("c.Q.json"));
  CHECK(q.at("coefficients").size() == 1);
  CHECK(q.at("coefficients").contains(""));
  const auto Q = symbol_from_json<SymbolKind::Hermitian>(q).symbol;
  CHECK(is_psd(Q.coeff(Word(1)), Tolerances{}).psd);

  CHECK(box.run("synth --d 0 --n 1 --h-dim 1 -o " + box.path("d")) == 2);
  CHECK(box.run("synth --d 2 --n 1 --h-dim 1 --density 0 -o " + box.path("d")) == 2);
}

TEST_CASE("synth, factor, verify") {
  Sandbox box;
  REQUIRE(box.run("synth --d 2 --n 2 --h-dim 2 --seed 11 -o " + box.path("s")) == 0);
  CHECK(box.run("verify " + box.path("s.Q.json") + " " + box.path("s.F.json") + " -o " + box.path("v.json")) == 0);
  const json exact = read_json_file(box.path("v.json"));
  CHECK(exact.at("coefficient_residual").get<double>() <= 1e-12);
  CHECK(exact.at("matrix_residual").get<double>() <= 1e-12);

  CHECK(box.run("factor " + box.path("s.Q.json") + " -o " + box.path("r.json")) == 0);
  CHECK(box.read("out").rfind("factor: residual", 0) == 0);
  const json report = read_json_file(box.path("r.json"));
  CHECK(report.at("residual").get<double>() <= 1e-6);
  CHECK(box.run("verify " + box.path("s.Q.json") + " " + box.path("r.json") + " --depth 3") == 0);

  // A factor of some other symbol fails verification.
  REQUIRE(box.run("synth --d 2 --n 2 --h-dim 2 --seed 12 -o " + box.path("t")) == 0);
  CHECK(box.run("verify " + box.path("s.Q.json") + " " + box.path("t.F.json")) == 1);
  REQUIRE(box.run("synth --d 3 --n 2 --h-dim 2 --seed 12 -o " + box.path("u")) == 0);
  CHECK(box.run("verify " + box.path("s.Q.json") + " " + box.path("u.F.json")) == 2);
}

TEST_CASE("factor exit codes") {
  Sandbox box;
  box.write("neg.json", R"({"d": 1, "n": 0, "h_dim": 1, "coefficients": {"": [[-1]]}})");
  CHECK(box.run("factor " + box.path("neg.json") + " -o " + box.path("r.json")) == 4);
  CHECK(box.read("err").find("depth 0") != std::string::npos);

  box.write("gate.json", R"({"d": 1, "n": 1, "h_dim": 1, "coefficients": {"": [[1]], "1": [[2]]}})");
  CHECK(box.run("factor " + box.path("gate.json") + " -o " + box.path("r.json")) == 4);
  CHECK(box.read("err").find("depth 1") != std::string::npos);

  box.write("shape.json", R"({"d": 1, "n": 1, "h_dim": 2, "coefficients": {"": [[1, 0], [0, 1]], "1": [[1]]}})");
  CHECK(box.run("factor " + box.path("shape.json") + " -o " + box.path("r.json")) == 2);
  box.write("garbage.json", "{not json");
  CHECK(box.run("factor " + box.path("garbage.json") + " -o " + box.path("r.json")) == 2);
  CHECK(box.run("factor " + box.path("missing.json") + " -o " + box.path("r.json")) == 2);
  CHECK(box.run("factor") == 2);

  // Boundary zero with a tiny depth cap: convergence warning.
  box.write("slow.json", R"({"d": 1, "n": 1, "h_dim": 1, "coefficients": {"": [[2]], "1": [[1]]}})");
  CHECK(box.run("factor " + box.path("slow.json") + " --depth-max 5 -o " + box.path("r.json")) == 3);
  CHECK(box.run("factor " + box.path("slow.json") + " --tol-conv 0 -o " + box.path("r.json")) == 2);
}

TEST_CASE("schur command") {
  Sandbox box;
  box.write("id.json", R"({"d": 2, "n": 0, "h_dim": 1, "coefficients": {"": [[1]]}})");
  REQUIRE(box.run("schur " + box.path("id.json") + " --m 1 -o " + box.path("s.json")) == 0);
  const json s = read_json_file(box.path("s.json"));
  CHECK(s.at("trace").size() == 1);
  const MatrixXc S = matrix_from_json(s.at("S"), 3, 3);
  CHECK((S - MatrixXc::Identity(3, 3)).norm() == 0.0);
  CHECK(s.at("levels").size() == 2);

  box.write("c.json", R"({"d": 1, "n": 1, "h_dim": 1, "coefficients": {"": [[5]], "1": [[2]]}})");
  REQUIRE(box.run("schur " + box.path("c.json") + " --m 0 -o " + box.path("s.json")) == 0);
  const double s0 = matrix_from_json(read_json_file(box.path("s.json")).at("S"), 1, 1)(0, 0).real();
  CHECK(std::abs(s0 - 4.0) <= 1e-6);

  REQUIRE(box.run("synth --d 2 --n 2 --h-dim 1 --seed 5 -o " + box.path("q")) == 0);
  REQUIRE(box.run("schur " + box.path("q.Q.json") + " --m 2 --check-recursion -o " + box.path("s.json")) == 0);
  const json rec = read_json_file(box.path("s.json")).at("recursion");
  CHECK(rec.at("lower_right").get<double>() <= 1e-7);
  CHECK(rec.at("top_left").get<double>() <= 1e-7);
  CHECK(rec.at("first_column").get<double>() <= 1e-7);

  box.write("gate.json", R"({"d": 1, "n": 1, "h_dim": 1, "coefficients": {"": [[1]], "1": [[2]]}})");
  CHECK(box.run("schur " + box.path("gate.json") + " --m 0") == 4);
}

TEST_CASE("check command") {
  Sandbox box;
  box.write("ok.json", R"({"d": 2, "n": 1, "h_dim": 1, "coefficients": {"": [[3]], "1": [[1]], "2": [[1]]}})");
  CHECK(box.run("check " + box.path("ok.json") + " --depth 3") == 0);
  CHECK(box.read("out").find("violation 0") != std::string::npos);
  box.write("gate.json", R"({"d": 1, "n": 1, "h_dim": 1, "coefficients": {"": [[1]], "1": [[2]]}})");
  CHECK(box.run("check " + box.path("gate.json")) == 4);
}
