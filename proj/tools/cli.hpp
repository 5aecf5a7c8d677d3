#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "logbn/domain.hpp"
#include "logbn/io.hpp"
#include "logbn/regions.hpp"
#include "logbn/solvers.hpp"
#include "logbn/testfunctions.hpp"

namespace logbn::cli {

enum class Command { eigen, solve, classify, phasediagram, asymptotics, verify };

const char* to_string(Command c);
Command parse_command(const std::string& text);

enum class Method { mountain_pass, ground_state, both };

/// λ as written in the config: a number, or a multiple of λ₁ ("lambda1",
/// "0.5*lambda1") resolved once the eigenvalue is known.
struct LambdaSpec {
  double value = 0.0;
  bool times_lambda1 = false;
  double resolve(double lambda1) const { return times_lambda1 ? value * lambda1 : value; }
};

struct RunConfig {
  Command command = Command::verify;
  ConfigMap raw;
  DomainSpec domain;
  std::optional<LambdaSpec> lambda;
  std::optional<double> mu;
  MPConfig solver;
  Method method = Method::mountain_pass;
  double eig_tol = 1e-6;
  CutoffSpec cutoff;
  std::vector<double> eps_list;
  Range lambda_range{-20.0, 60.0};
  Range mu_range{-5.0, 5.0};
  int lattice = 100;
  int curve_count = 200;
  int confirm_budget = 0;
  std::string output_dir = ".";
  int jobs = 1;
  std::uint64_t seed = 0;
};

/// Validates every key against the command. Missing required fields and
/// malformed values raise Error(usage) naming the key.
RunConfig make_run_config(Command command, const ConfigMap& raw, const std::string& output_dir, int jobs);

/// Executes the command, writes its artifacts under output_dir, prints a
/// short summary to out, and returns the exit code (errors are reported on
/// err and mapped through exit_code).
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Output directory precedence: explicit flag, config key, LOGBN_OUTPUT_DIR, ".".
std::string resolve_output_dir(const std::string& flag, const ConfigMap& raw);

}  // namespace logbn::cli
