#include <CLI11.hpp>

#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  using namespace logbn;
  CLI::App app{"Positive solutions, energy thresholds and region classification for "
               "-Δu = |u|^{2*-2}u + λu + μu log u²"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::string output_dir;
  int jobs = 1;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "flat key=value config file");
    sub->add_option("--set", overrides, "override one key, key=value (repeatable)");
    sub->add_option("--output-dir", output_dir, "artifact directory (default: $LOGBN_OUTPUT_DIR or .)");
    sub->add_option("--jobs", jobs, "worker cap; 1 is sequential and reproducible");
  };
  for (const char* name : {"eigen", "solve", "classify", "phasediagram", "asymptotics", "verify"}) {
    common(app.add_subcommand(name));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_code(ErrorKind::usage);
  }

  try {
    const cli::Command command = cli::parse_command(app.get_subcommands().front()->get_name());
    ConfigMap raw = config_path.empty() ? ConfigMap{} : read_config(config_path);
    for (const auto& s : overrides) apply_override(raw, s);
    const auto cfg = cli::make_run_config(command, raw, cli::resolve_output_dir(output_dir, raw), jobs);
    return cli::run(cfg, std::cout, std::cerr);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code(e.kind());
  }
}
