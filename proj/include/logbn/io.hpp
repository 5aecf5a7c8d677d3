#pragma once

#include <map>
#include <string>
#include <vector>

#include "logbn/domain.hpp"
#include "logbn/functional.hpp"

namespace logbn {

struct MPResult;

/// Text field file: "N h dims... lambda mu level residual status" on the
/// first line, then one value per interior point in lexicographic order.
struct SolutionFile {
  int dim = 0;
  double h = 0.0;
  std::vector<int> dims;
  double lambda = 0.0;
  double mu = 0.0;
  double level = 0.0;
  double residual = 0.0;
  std::string status;
  Field u;
};

void write_solution(const std::string& path, const Grid& grid, const Params& p, const MPResult& r);
SolutionFile read_solution(const std::string& path);

/// Flat key=value config. '#' starts a comment; blank lines are skipped.
using ConfigMap = std::map<std::string, std::string>;
ConfigMap read_config(const std::string& path);
ConfigMap parse_config(const std::string& text, const std::string& origin = "config");
/// Applies "key=value".
void apply_override(ConfigMap& cfg, const std::string& assignment);

std::vector<double> parse_list(const std::string& text, const std::string& key);

/// Comma-separated table with a header row. No quoting: fields never contain commas.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  /// Throws Error(io) for an unknown column.
  std::size_t column(const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;
};

CsvTable read_csv(const std::string& path);

}  // namespace logbn
