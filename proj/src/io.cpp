#include "logbn/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "logbn/solvers.hpp"

namespace logbn {

namespace {
std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}
}  // namespace

void write_solution(const std::string& path, const Grid& grid, const Params& p, const MPResult& r) {
  detail::check_shape(grid, r.u.size());
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path);
  out << grid.dim << ' ' << fmt(grid.h);
  for (int d : grid.dims) out << ' ' << d;
  out << ' ' << fmt(p.lambda) << ' ' << fmt(p.mu) << ' ' << fmt(r.level) << ' ' << fmt(r.residual) << ' '
      << to_string(r.status) << '\n';
  for (Index i = 0; i < r.u.size(); ++i) out << fmt(r.u(i)) << '\n';
  if (!out) throw Error(ErrorKind::io, "write failed: " + path);
}

SolutionFile read_solution(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot read " + path);
  SolutionFile s;
  std::string header;
  std::getline(in, header);
  std::istringstream hs(header);
  if (!(hs >> s.dim >> s.h) || s.dim < 1 || s.dim > 8) throw Error(ErrorKind::io, path + ": bad header");
  s.dims.resize(static_cast<std::size_t>(s.dim));
  for (int& d : s.dims) {
    if (!(hs >> d)) throw Error(ErrorKind::io, path + ": bad header dims");
  }
  if (!(hs >> s.lambda >> s.mu >> s.level >> s.residual >> s.status)) {
    throw Error(ErrorKind::io, path + ": bad header fields");
  }
  std::vector<double> values;
  double v;
  while (in >> v) values.push_back(v);
  if (!in.eof()) throw Error(ErrorKind::io, path + ": non-numeric field value");
  s.u = Eigen::Map<const Field>(values.data(), static_cast<Index>(values.size()));
  return s;
}

ConfigMap parse_config(const std::string& text, const std::string& origin) {
  ConfigMap cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::usage, origin + ":" + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw Error(ErrorKind::usage, origin + ":" + std::to_string(lineno) + ": empty key");
    cfg[key] = trim(line.substr(eq + 1));
  }
  return cfg;
}

ConfigMap read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::usage, "config: cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

void apply_override(ConfigMap& cfg, const std::string& assignment) {
  const auto parsed = parse_config(assignment, "--set");
  if (parsed.size() != 1) throw Error(ErrorKind::usage, "--set expects key=value, got '" + assignment + "'");
  cfg[parsed.begin()->first] = parsed.begin()->second;
}

std::vector<double> parse_list(const std::string& text, const std::string& key) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw Error(ErrorKind::usage, key + ": not a number: '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw Error(ErrorKind::usage, key + ": empty list");
  return out;
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw Error(ErrorKind::io, "csv: no column '" + name + "'");
}

double CsvTable::number(std::size_t row, const std::string& name) const {
  const std::string& cell = rows.at(row).at(column(name));
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(cell, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != cell.size() || cell.empty()) throw Error(ErrorKind::io, "csv: column " + name + ": not a number: '" + cell + "'");
  return v;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot read " + path);
  auto split = [](const std::string& line) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream ls(line);
    while (std::getline(ls, item, ',')) out.push_back(item);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
  };
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::io, path + ": empty file");
  t.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto row = split(line);
    if (row.size() != t.header.size()) throw Error(ErrorKind::io, path + ": ragged row");
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace logbn
