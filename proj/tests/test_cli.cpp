#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

using namespace logbn;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("logbn_cli_" + name);
  fs::remove_all(p);
  return p;
}

int run_command(cli::Command c, const ConfigMap& raw, const fs::path& dir, std::string* out_text = nullptr) {
  std::ostringstream out, err;
  const int code = cli::run(cli::make_run_config(c, raw, dir.string(), 1), out, err);
  if (out_text) *out_text = out.str();
  return code;
}

nlohmann::json load(const fs::path& p) {
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

std::string without_timestamp(const fs::path& p) {
  auto j = load(p);
  j.erase("timestamp");
  return j.dump();
}

}  // namespace

TEST_CASE("commands parse") {
  CHECK(cli::parse_command("phasediagram") == cli::Command::phasediagram);
  CHECK_THROWS_AS(cli::parse_command("plot"), Error);
}

TEST_CASE("missing or malformed keys name the field") {
  auto expect_usage = [](cli::Command c, const ConfigMap& raw, const std::string& key) {
    try {
      cli::make_run_config(c, raw, ".", 1);
      FAIL("expected a usage error for " << key);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::usage);
      CHECK(std::string(e.what()).rfind(key + ":", 0) == 0);
    }
  };
  expect_usage(cli::Command::solve, {{"lambda", "0"}}, "mu");
  expect_usage(cli::Command::classify, {{"mu", "1"}}, "lambda");
  expect_usage(cli::Command::solve, {{"lambda", "0"}, {"mu", "one"}}, "mu");
  expect_usage(cli::Command::verify, {{"path_poinst", "16"}}, "path_poinst");
  expect_usage(cli::Command::verify, {{"N", "7"}}, "N");
  expect_usage(cli::Command::verify, {{"max_outer", "1.5"}}, "max_outer");
  expect_usage(cli::Command::asymptotics, {{"eps_list", "0.1,x"}}, "eps_list");
  expect_usage(cli::Command::solve, {{"lambda", "0"}, {"mu", "1"}, {"method", "newton"}}, "method");
  CHECK_THROWS_AS(cli::make_run_config(cli::Command::verify, {}, ".", 0), Error);
}

TEST_CASE("lambda as a multiple of the first eigenvalue") {
  const auto cfg = cli::make_run_config(cli::Command::solve, {{"lambda", "0.5*lambda1"}, {"mu", "0"}}, ".", 1);
  REQUIRE(cfg.lambda);
  CHECK(cfg.lambda->times_lambda1);
  CHECK(cfg.lambda->resolve(40.0) == 20.0);
  const auto plain = cli::make_run_config(cli::Command::solve, {{"lambda", "-5"}, {"mu", "1"}}, ".", 1);
  CHECK(plain.lambda->resolve(40.0) == -5.0);
}

TEST_CASE("output directory precedence") {
  ::setenv("LOGBN_OUTPUT_DIR", "/tmp/from_env", 1);
  CHECK(cli::resolve_output_dir("", {}) == "/tmp/from_env");
  CHECK(cli::resolve_output_dir("", {{"output_dir", "cfgdir"}}) == "cfgdir");
  CHECK(cli::resolve_output_dir("flagdir", {{"output_dir", "cfgdir"}}) == "flagdir");
  ::unsetenv("LOGBN_OUTPUT_DIR");
  CHECK(cli::resolve_output_dir("", {}) == ".");
}

TEST_CASE("classify writes a verdict document") {
  const auto dir = scratch("classify");
  CHECK(run_command(cli::Command::classify, {{"N", "4"}, {"lambda", "0"}, {"mu", "1"}, {"resolution", "12"}}, dir) == 0);
  const auto doc = load(dir / "verdict.json");
  CHECK(doc["result"]["label"] == "A0_exists");
  CHECK(doc["command"] == "classify");
  CHECK(doc.contains("timestamp"));

  CHECK(run_command(cli::Command::classify, {{"N", "3"}, {"lambda", "lambda1"}, {"mu", "-2"}, {"resolution", "12"}},
                    dir) == 0);
  const auto non = load(dir / "verdict.json");
  CHECK(non["result"]["label"] == "nonexistence_T14");
  CHECK(non["result"]["f_min"]["scan_consistent"] == true);
  fs::remove_all(dir);
}

TEST_CASE("verify on the unit cube passes every suite") {
  const auto dir = scratch("verify");
  std::string text;
  CHECK(run_command(cli::Command::verify, {{"N", "3"}, {"resolution", "32"}}, dir, &text) == 0);
  INFO(text);
  const auto doc = load(dir / "verify.json");
  CHECK(doc["result"]["failed"] == 0);
  CHECK(doc["result"]["passed"].get<int>() >= 10);
  fs::remove_all(dir);
}

TEST_CASE("solve artifacts round trip and are reproducible") {
  const ConfigMap raw{{"N", "4"},         {"resolution", "10"}, {"lambda", "0"},
                      {"mu", "1"},        {"seed", "5"},        {"method", "both"}};
  const auto a = scratch("solve_a");
  const auto b = scratch("solve_b");
  REQUIRE(run_command(cli::Command::solve, raw, a) == 0);
  REQUIRE(run_command(cli::Command::solve, raw, b) == 0);
  CHECK(without_timestamp(a / "solution.json") == without_timestamp(b / "solution.json"));

  const auto doc = load(a / "solution.json");
  const auto mp = doc["result"]["mountain_pass"];
  CHECK(mp["status"] == "converged");
  CHECK(mp["positive"] == true);
  const SolutionFile f = read_solution((a / "solution.txt").string());
  CHECK(f.level == mp["level"].get<double>());
  CHECK(f.status == "converged");
  CHECK(f.mu == 1.0);
  const SolutionFile gs = read_solution((a / "ground_state.txt").string());
  CHECK(std::abs(gs.level - f.level) <= 2e-6);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("phasediagram and asymptotics artifacts") {
  const auto dir = scratch("phase");
  REQUIRE(run_command(cli::Command::phasediagram,
                      {{"N", "3"}, {"resolution", "12"}, {"lattice", "12"}, {"curve_count", "9"}, {"mu_min", "-4"},
                       {"mu_max", "2"}},
                      dir) == 0);
  const auto cells = read_phase_csv((dir / "phase.csv").string());
  CHECK(cells.size() == 144);
  for (const char* c : {"tau1", "eta1", "eta2", "eta3"}) {
    const auto s = read_curves_csv((dir / (std::string("curve_") + c + ".csv")).string());
    CHECK(!s.empty());
  }
  const auto doc = load(dir / "phase.json");
  CHECK(doc["result"]["cells"] == 144);

  REQUIRE(run_command(cli::Command::asymptotics, {{"N", "5"}, {"eps_list", "0.08,0.04,0.02"}}, dir) == 0);
  const auto rep = read_asymptotics_csv((dir / "asymptotics.csv").string());
  CHECK(rep.rows.size() == 3);
  CHECK(load(dir / "asymptotics.json")["result"]["pass"] == true);
  fs::remove_all(dir);
}

TEST_CASE("numerical failures map to exit codes") {
  const auto dir = scratch("fail");
  // Two ε values are too few for a fit.
  std::ostringstream out, err;
  auto cfg = cli::make_run_config(cli::Command::asymptotics, {{"N", "5"}, {"eps_list", "0.1,0.05"}}, dir.string(), 1);
  CHECK(cli::run(cfg, out, err) == 2);
  CHECK(err.str().find("usage") != std::string::npos);
  fs::remove_all(dir);
}
