#include "cli.hpp"

#include <Eigen/Core>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>

#include "logbn/constants.hpp"
#include "logbn/verify.hpp"

namespace logbn::cli {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

const char* to_string(Command c) {
  switch (c) {
    case Command::eigen: return "eigen";
    case Command::solve: return "solve";
    case Command::classify: return "classify";
    case Command::phasediagram: return "phasediagram";
    case Command::asymptotics: return "asymptotics";
    case Command::verify: return "verify";
  }
  return "?";
}

Command parse_command(const std::string& text) {
  for (Command c : {Command::eigen, Command::solve, Command::classify, Command::phasediagram, Command::asymptotics,
                    Command::verify}) {
    if (text == to_string(c)) return c;
  }
  throw Error(ErrorKind::usage, "command: unknown command '" + text + "'");
}

namespace {

const std::set<std::string> known_keys{
    "domain",       "N",           "extents",       "resolution",     "mask_file",  "lambda",     "mu",
    "path_points",  "descent_step", "max_outer",    "grad_tol",       "energy_tol", "seed",       "initial_direction",
    "direction_file", "method",    "eig_tol",       "rho",            "center",     "eps_list",   "lambda_min",
    "lambda_max",   "mu_min",      "mu_max",        "lattice",        "curve_count", "confirm_budget", "output_dir"};

class Reader {
 public:
  explicit Reader(const ConfigMap& raw) : raw_(raw) {}

  bool has(const std::string& key) const { return raw_.count(key) != 0; }
  const std::string& text(const std::string& key) const { return raw_.at(key); }

  double real(const std::string& key, double fallback) const {
    return has(key) ? parse_real(key, text(key)) : fallback;
  }
  double real(const std::string& key) const {
    require(key);
    return parse_real(key, text(key));
  }
  long long integer(const std::string& key, long long fallback) const {
    if (!has(key)) return fallback;
    const std::string& s = text(key);
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (s.empty() || used != s.size()) throw Error(ErrorKind::usage, key + ": not an integer: '" + s + "'");
    return v;
  }
  void require(const std::string& key) const {
    if (!has(key)) throw Error(ErrorKind::usage, key + ": required but missing from the config");
  }

  static double parse_real(const std::string& key, const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (s.empty() || used != s.size() || !std::isfinite(v)) {
      throw Error(ErrorKind::usage, key + ": not a finite number: '" + s + "'");
    }
    return v;
  }

 private:
  const ConfigMap& raw_;
};

LambdaSpec parse_lambda(const std::string& s) {
  const std::string tag = "lambda1";
  if (s == tag) return {1.0, true};
  if (s.size() > tag.size() + 1 && s.ends_with("*" + tag)) {
    return {Reader::parse_real("lambda", s.substr(0, s.size() - tag.size() - 1)), true};
  }
  return {Reader::parse_real("lambda", s), false};
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json domain_json(const RunConfig& cfg, const Grid& grid) {
  json d;
  d["kind"] = to_string(cfg.domain.kind);
  d["N"] = grid.dim;
  d["h"] = grid.h;
  d["dims"] = grid.dims;
  d["interior_points"] = grid.size();
  d["volume"] = grid.volume;
  return d;
}

// The config as given, then the command's results; the timestamp is the
// only field that changes between identical runs.
void write_metadata(const RunConfig& cfg, const fs::path& path, json result, const std::vector<std::string>& artifacts) {
  json doc;
  doc["command"] = to_string(cfg.command);
  doc["config"] = json(cfg.raw);
  doc["jobs"] = cfg.jobs;
  doc["result"] = std::move(result);
  doc["artifacts"] = artifacts;
  doc["timestamp"] = timestamp();
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw Error(ErrorKind::io, "write failed: " + path.string());
}

Grid make_grid(const RunConfig& cfg) {
  return cfg.domain.kind == DomainKind::mask_file ? read_mask_file(cfg.domain.mask_path) : build_grid(cfg.domain);
}

double domain_inradius(const RunConfig& cfg, const Grid& grid) {
  return cfg.domain.kind == DomainKind::mask_file ? inradius(grid) : rho_max(cfg.domain);
}

DomainConstants domain_constants(const RunConfig& cfg, const Grid& grid, const SpectralPair& eig) {
  return {eig.lambda1, grid.volume, sobolev_constant(grid.dim).S, domain_inradius(cfg, grid), grid.dim};
}

json result_json(const MPResult& r, const Grid& grid) {
  json j;
  j["status"] = to_string(r.status);
  j["level"] = r.level;
  j["residual"] = r.residual;
  j["iterations"] = r.iterations;
  j["positive"] = positivity_check(grid, r.u);
  j["multiple_roots"] = r.multiple_roots;
  j["level_history"] = r.level_history;
  return j;
}

int cmd_eigen(const RunConfig& cfg, std::ostream& out) {
  const Grid grid = make_grid(cfg);
  const SpectralPair eig = first_eigenpair(grid, cfg.eig_tol);
  json r;
  r["domain"] = domain_json(cfg, grid);
  r["lambda1"] = eig.lambda1;
  r["residual"] = eig.residual;
  r["iterations"] = eig.iterations;
  r["phi1_min"] = eig.phi1.minCoeff();
  r["phi1_max"] = eig.phi1.maxCoeff();
  write_metadata(cfg, fs::path(cfg.output_dir) / "eigen.json", r, {"eigen.json"});
  out << "lambda1 " << eig.lambda1 << " residual " << eig.residual << " iterations " << eig.iterations << '\n';
  return 0;
}

int cmd_solve(const RunConfig& cfg, std::ostream& out) {
  const Grid grid = make_grid(cfg);
  const SpectralPair eig = first_eigenpair(grid, cfg.eig_tol);
  const Params p{cfg.lambda->resolve(eig.lambda1), *cfg.mu, grid.dim};
  p.validate();
  const double S = sobolev_constant(grid.dim).S;
  json r;
  r["domain"] = domain_json(cfg, grid);
  r["lambda1"] = eig.lambda1;
  r["lambda"] = p.lambda;
  r["mu"] = p.mu;
  r["threshold"] = std::pow(S, grid.dim / 2.0) / grid.dim;
  std::vector<std::string> artifacts;
  const fs::path dir(cfg.output_dir);
  if (cfg.method != Method::ground_state) {
    const MPResult mp = mountain_pass_solve(grid, p, cfg.solver, &eig);
    write_solution((dir / "solution.txt").string(), grid, p, mp);
    artifacts.push_back("solution.txt");
    r["mountain_pass"] = result_json(mp, grid);
    out << "mountain_pass " << to_string(mp.status) << " level " << mp.level << " residual " << mp.residual
        << " iterations " << mp.iterations << '\n';
  }
  if (cfg.method != Method::mountain_pass) {
    const MPResult gs = ground_state_search(grid, p, cfg.solver, &eig);
    write_solution((dir / "ground_state.txt").string(), grid, p, gs);
    artifacts.push_back("ground_state.txt");
    r["ground_state"] = result_json(gs, grid);
    out << "ground_state " << to_string(gs.status) << " level " << gs.level << " residual " << gs.residual
        << " iterations " << gs.iterations << '\n';
  }
  artifacts.push_back("solution.json");
  write_metadata(cfg, dir / "solution.json", r, artifacts);
  return 0;
}

int cmd_classify(const RunConfig& cfg, std::ostream& out) {
  const Grid grid = make_grid(cfg);
  const SpectralPair eig = first_eigenpair(grid, cfg.eig_tol);
  const DomainConstants k = domain_constants(cfg, grid, eig);
  const Params p{cfg.lambda->resolve(eig.lambda1), *cfg.mu, grid.dim};
  const RegionVerdict v = classify(p, k);
  const RuleMargins m = rule_margins(p, k);
  json r;
  r["label"] = to_string(v.label);
  r["basis"] = v.basis;
  r["margin"] = v.margin;
  r["lambda"] = p.lambda;
  r["mu"] = p.mu;
  r["N"] = p.dim;
  r["constants"] = {{"lambda1", k.lambda1}, {"volume", k.volume}, {"S", k.S}, {"rho_max", k.rho_max}};
  json margins = {{"alpha_b0", m.alpha_b0}, {"alpha_c0", m.alpha_c0}, {"eta3", m.eta3}, {"b0", m.b0}, {"c0", m.c0}};
  if (p.mu < 0.0) {
    margins["nonexistence"] = m.nonexistence;
    const FMin f = f_min(p, k.lambda1);
    r["f_min"] = {{"s0", f.s0}, {"fmin", f.fmin}, {"scan_min", f.scan_min}, {"scan_consistent", f.scan_consistent}};
  }
  r["margins"] = margins;
  write_metadata(cfg, fs::path(cfg.output_dir) / "verdict.json", r, {"verdict.json"});
  out << to_string(v.label) << " (" << v.basis << ", margin " << v.margin << ")\n";
  return 0;
}

int cmd_phasediagram(const RunConfig& cfg, std::ostream& out) {
  const Grid grid = make_grid(cfg);
  const SpectralPair eig = first_eigenpair(grid, cfg.eig_tol);
  const DomainConstants k = domain_constants(cfg, grid, eig);
  auto cells = phase_diagram(k, cfg.lambda_range, cfg.mu_range, cfg.lattice);
  confirm_cells(cells, grid, cfg.solver, cfg.confirm_budget, &eig);
  const fs::path dir(cfg.output_dir);
  write_phase_csv((dir / "phase.csv").string(), cells);
  std::vector<std::string> artifacts{"phase.csv"};
  json notes = json::array();
  json counts = json::object();
  for (const auto& c : cells) counts[to_string(c.verdict.label)] = counts.value(to_string(c.verdict.label), 0) + 1;
  if (cfg.mu_range.lo < 0.0) {
    const double hi = cfg.mu_range.hi < 0.0 ? cfg.mu_range.hi : -1e-3 * (cfg.mu_range.hi - cfg.mu_range.lo);
    for (Curve c : {Curve::tau1, Curve::eta1, Curve::eta2, Curve::eta3}) {
      const CurveSamples cs = curve_samples(c, cfg.mu_range.lo, hi, k, cfg.curve_count);
      const std::string name = std::string("curve_") + to_string(c) + ".csv";
      write_curves_csv((dir / name).string(), cs.samples);
      artifacts.push_back(name);
      for (const auto& n : cs.notes) notes.push_back(n);
    }
  } else {
    notes.push_back("mu range has no negative values; curves skipped");
  }
  artifacts.push_back("phase.json");
  json r;
  r["constants"] = {{"lambda1", k.lambda1}, {"volume", k.volume}, {"S", k.S}, {"rho_max", k.rho_max}};
  r["cells"] = cells.size();
  r["label_counts"] = counts;
  int confirmed = 0, disagree = 0;
  for (const auto& c : cells) {
    confirmed += c.confirmed;
    disagree += c.agrees.has_value() && !*c.agrees;
  }
  r["confirmed"] = confirmed;
  r["disagreements"] = disagree;
  r["notes"] = notes;
  write_metadata(cfg, dir / "phase.json", r, artifacts);
  out << cells.size() << " cells";
  for (const auto& [label, n] : counts.items()) out << ", " << label << ' ' << n.get<int>();
  out << '\n';
  if (confirmed) out << confirmed << " confirmed, " << disagree << " disagreements\n";
  return 0;
}

int cmd_asymptotics(const RunConfig& cfg, std::ostream& out) {
  const int dim = cfg.domain.dim;
  const AsymptoticsReport rep = asymptotics_report(cfg.cutoff, dim, cfg.eps_list);
  const fs::path dir(cfg.output_dir);
  write_asymptotics_csv((dir / "asymptotics.csv").string(), rep);
  json r;
  r["N"] = dim;
  r["rho"] = rep.rho;
  r["pass"] = rep.pass();
  json checks = json::array();
  for (const auto& c : rep.checks) {
    checks.push_back({{"name", c.name},
                      {"measured", c.measured},
                      {"expected", c.expected},
                      {"tolerance", c.tolerance},
                      {"pass", c.pass},
                      {"note", c.note}});
    out << (c.pass ? "PASS " : "FAIL ") << c.name << " measured " << c.measured << " expected " << c.expected << '\n';
  }
  r["checks"] = checks;
  write_metadata(cfg, dir / "asymptotics.json", r, {"asymptotics.csv", "asymptotics.json"});
  return rep.pass() ? 0 : exit_code(ErrorKind::accuracy);
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const VerifyReport rep = run_verify(cfg.domain, cfg.seed);
  json checks = json::array();
  for (const auto& c : rep.checks) {
    checks.push_back({{"suite", c.suite}, {"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    out << (c.pass ? "PASS " : "FAIL ") << c.suite << '/' << c.name << ": " << c.detail << '\n';
  }
  json r;
  r["passed"] = rep.passed();
  r["failed"] = rep.failed();
  r["checks"] = checks;
  write_metadata(cfg, fs::path(cfg.output_dir) / "verify.json", r, {"verify.json"});
  out << "passed " << rep.passed() << " failed " << rep.failed() << '\n';
  return rep.failed() == 0 ? 0 : exit_code(ErrorKind::accuracy);
}

std::vector<double> default_eps(int dim) {
  if (dim == 3) return {1e-6, 1e-7, 1e-8, 1e-9, 1e-10, 1e-11, 1e-12};
  return {0.1, 0.05, 0.025, 0.0125};
}

}  // namespace

std::string resolve_output_dir(const std::string& flag, const ConfigMap& raw) {
  if (!flag.empty()) return flag;
  if (auto it = raw.find("output_dir"); it != raw.end()) return it->second;
  if (const char* env = std::getenv("LOGBN_OUTPUT_DIR"); env && *env) return env;
  return ".";
}

RunConfig make_run_config(Command command, const ConfigMap& raw, const std::string& output_dir, int jobs) {
  for (const auto& [key, value] : raw) {
    if (!known_keys.count(key)) throw Error(ErrorKind::usage, key + ": unknown config key");
  }
  if (jobs < 1) throw Error(ErrorKind::usage, "jobs: must be at least 1");
  const Reader rd(raw);
  RunConfig cfg;
  cfg.command = command;
  cfg.raw = raw;
  cfg.output_dir = output_dir;
  cfg.jobs = jobs;

  cfg.domain.kind = rd.has("domain") ? parse_domain_kind(rd.text("domain")) : DomainKind::box;
  cfg.domain.dim = static_cast<int>(rd.integer("N", 3));
  if (rd.has("extents")) cfg.domain.extents = parse_list(rd.text("extents"), "extents");
  cfg.domain.resolution = rd.real("resolution", 32.0);
  if (cfg.domain.kind == DomainKind::mask_file) {
    rd.require("mask_file");
    cfg.domain.mask_path = rd.text("mask_file");
  }
  if (command != Command::asymptotics && cfg.domain.kind != DomainKind::mask_file) cfg.domain.validate();
  if (cfg.domain.dim < 3 || cfg.domain.dim > 5) throw Error(ErrorKind::usage, "N: dimension must be 3, 4 or 5");

  if (command == Command::solve || command == Command::classify) {
    rd.require("lambda");
    rd.require("mu");
    cfg.lambda = parse_lambda(rd.text("lambda"));
    cfg.mu = rd.real("mu");
  }

  cfg.seed = static_cast<std::uint64_t>(rd.integer("seed", 0));
  cfg.solver.seed = cfg.seed;
  cfg.solver.path_points = static_cast<int>(rd.integer("path_points", cfg.solver.path_points));
  cfg.solver.descent_step = rd.real("descent_step", cfg.solver.descent_step);
  cfg.solver.max_outer = static_cast<int>(rd.integer("max_outer", cfg.solver.max_outer));
  cfg.solver.grad_tol = rd.real("grad_tol", cfg.solver.grad_tol);
  cfg.solver.energy_tol = rd.real("energy_tol", cfg.solver.energy_tol);
  if (rd.has("initial_direction")) cfg.solver.initial_direction = parse_initial_direction(rd.text("initial_direction"));
  if (rd.has("direction_file")) cfg.solver.direction_file = rd.text("direction_file");
  cfg.solver.validate();
  if (rd.has("method")) {
    const std::string& m = rd.text("method");
    if (m == "mountain_pass") cfg.method = Method::mountain_pass;
    else if (m == "ground_state") cfg.method = Method::ground_state;
    else if (m == "both") cfg.method = Method::both;
    else throw Error(ErrorKind::usage, "method: expected mountain_pass, ground_state or both, got '" + m + "'");
  }
  cfg.eig_tol = rd.real("eig_tol", cfg.eig_tol);

  cfg.cutoff.profile = default_profile(cfg.domain.dim);
  cfg.cutoff.rho = rd.real("rho", cfg.cutoff.rho);
  if (rd.has("center")) cfg.cutoff.center = parse_list(rd.text("center"), "center");
  cfg.cutoff.validate();
  cfg.eps_list = rd.has("eps_list") ? parse_list(rd.text("eps_list"), "eps_list") : default_eps(cfg.domain.dim);

  cfg.lambda_range = {rd.real("lambda_min", cfg.lambda_range.lo), rd.real("lambda_max", cfg.lambda_range.hi)};
  cfg.mu_range = {rd.real("mu_min", cfg.mu_range.lo), rd.real("mu_max", cfg.mu_range.hi)};
  if (!(cfg.lambda_range.lo < cfg.lambda_range.hi)) throw Error(ErrorKind::usage, "lambda_min: must be below lambda_max");
  if (!(cfg.mu_range.lo < cfg.mu_range.hi)) throw Error(ErrorKind::usage, "mu_min: must be below mu_max");
  cfg.lattice = static_cast<int>(rd.integer("lattice", cfg.lattice));
  cfg.curve_count = static_cast<int>(rd.integer("curve_count", cfg.curve_count));
  cfg.confirm_budget = static_cast<int>(rd.integer("confirm_budget", cfg.confirm_budget));
  if (cfg.confirm_budget < 0) throw Error(ErrorKind::usage, "confirm_budget: must be non-negative");
  return cfg;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    if (ec || !fs::is_directory(cfg.output_dir)) {
      throw Error(ErrorKind::io, "output_dir: cannot create '" + cfg.output_dir + "'");
    }
    Eigen::setNbThreads(cfg.jobs);
    switch (cfg.command) {
      case Command::eigen: return cmd_eigen(cfg, out);
      case Command::solve: return cmd_solve(cfg, out);
      case Command::classify: return cmd_classify(cfg, out);
      case Command::phasediagram: return cmd_phasediagram(cfg, out);
      case Command::asymptotics: return cmd_asymptotics(cfg, out);
      case Command::verify: return cmd_verify(cfg, out);
    }
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code(e.kind());
  }
  return 1;
}

}  // namespace logbn::cli
