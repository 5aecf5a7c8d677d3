#include "logbn/regions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "logbn/io.hpp"

namespace logbn {

const char* to_string(RegionLabel label) {
  switch (label) {
    case RegionLabel::A0_exists: return "A0_exists";
    case RegionLabel::B0_exists: return "B0_exists";
    case RegionLabel::C0_exists: return "C0_exists";
    case RegionLabel::N4_exists_eta3: return "N4_exists_eta3";
    case RegionLabel::nonexistence_T14: return "nonexistence_T14";
    case RegionLabel::unknown: return "unknown";
  }
  return "?";
}

RegionLabel parse_region_label(const std::string& text) {
  for (RegionLabel l : {RegionLabel::A0_exists, RegionLabel::B0_exists, RegionLabel::C0_exists,
                        RegionLabel::N4_exists_eta3, RegionLabel::nonexistence_T14, RegionLabel::unknown}) {
    if (text == to_string(l)) return l;
  }
  throw Error(ErrorKind::io, "unknown region label '" + text + "'");
}

bool is_existence(RegionLabel label) {
  return label == RegionLabel::A0_exists || label == RegionLabel::B0_exists || label == RegionLabel::C0_exists ||
         label == RegionLabel::N4_exists_eta3;
}

void DomainConstants::validate() const {
  if (dim < 3 || dim > 5) throw Error(ErrorKind::usage, "N: dimension must be 3, 4 or 5");
  if (!(lambda1 > 0.0) || !(volume > 0.0) || !(S > 0.0) || !(rho_max > 0.0)) {
    throw Error(ErrorKind::usage, "domain constants must all be positive");
  }
}

double nonexistence_value(const Params& p, double lambda1) {
  const double q = -(p.dim - 2.0) * p.mu / 2.0;
  return q - q * std::log(q) + p.lambda - lambda1;
}

bool nonexistence_predicate(const Params& p, double lambda1) {
  return p.mu < 0.0 && nonexistence_value(p, lambda1) >= 0.0;
}

RuleMargins rule_margins(const Params& p, const DomainConstants& k) {
  const int n = p.dim;
  const double sn = std::pow(k.S, n / 2.0);
  RuleMargins m;
  m.nonexistence = p.mu < 0.0 ? nonexistence_value(p, k.lambda1) : -std::numeric_limits<double>::infinity();
  const double q = (k.lambda1 - p.lambda) / k.lambda1;
  m.alpha_b0 = (q > 0.0 ? std::pow(q, n / 2.0) : 0.0) * sn / n + 0.5 * p.mu * k.volume;
  m.alpha_c0 = sn / n + 0.5 * p.mu * std::exp(-p.lambda / p.mu) * k.volume;
  m.eta3 = k.rho_max * k.rho_max - 32.0 * std::exp(p.lambda / p.mu);
  // λ = 0 belongs to B₀, so the λ ≥ 0 constraint only bites below zero.
  const double lower = p.lambda >= 0.0 ? std::numeric_limits<double>::infinity() : p.lambda;
  m.b0 = std::min({lower, k.lambda1 - p.lambda, -p.mu, m.alpha_b0});
  m.c0 = std::min(-p.mu, m.alpha_c0);
  return m;
}

RegionVerdict classify(const Params& p, const DomainConstants& k) {
  p.validate();
  k.validate();
  if (p.dim != k.dim) throw Error(ErrorKind::usage, "N: params and domain constants disagree");
  const RuleMargins m = rule_margins(p, k);

  if (p.mu < 0.0 && m.nonexistence >= 0.0) {
    return {RegionLabel::nonexistence_T14, "fiber_nonexistence_predicate", m.nonexistence};
  }
  if (p.mu > 0.0 && p.dim >= 4) return {RegionLabel::A0_exists, "positive_mu_N_ge_4", p.mu};
  if (p.mu < 0.0 && p.dim == 3) {
    if (m.b0 > 0.0) return {RegionLabel::B0_exists, "B0_region_N3", m.b0};
    if (m.c0 > 0.0) return {RegionLabel::C0_exists, "C0_region_N3", m.c0};
    return {RegionLabel::unknown, "outside_B0_C0", std::max(m.b0, m.c0)};
  }
  if (p.mu < 0.0 && p.dim == 4) {
    const double margin = std::min(std::max(m.b0, m.c0), m.eta3);
    if (margin > 0.0) return {RegionLabel::N4_exists_eta3, "B0_C0_with_inradius_condition", margin};
    return {RegionLabel::unknown, "outside_B0_C0_or_inradius_condition", margin};
  }
  if (p.mu < 0.0) return {RegionLabel::unknown, "no_rule_for_N5_negative_mu", 0.0};
  return {RegionLabel::unknown, p.mu == 0.0 ? "boundary_mu_zero" : "no_rule_for_N3_positive_mu", 0.0};
}

FMin f_min(const Params& p, double lambda1) {
  p.validate();
  if (!(p.mu < 0.0)) throw Error(ErrorKind::regime, "f_min: needs mu < 0");
  const double ex = p.two_star() - 2.0;
  auto f = [&](double s) { return std::pow(s, ex) + p.mu * std::log(s * s) + p.lambda - lambda1; };
  FMin out;
  out.s0 = std::pow(-(p.dim - 2.0) * p.mu / 2.0, (p.dim - 2.0) / 4.0);
  out.fmin = f(out.s0);
  constexpr int samples = 100000;
  out.scan_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const double s = std::pow(10.0, -8.0 + 16.0 * i / (samples - 1));
    out.scan_min = std::min(out.scan_min, f(s));
  }
  out.scan_consistent = out.scan_min >= out.fmin - 1e-8;
  return out;
}

const char* to_string(Curve c) {
  switch (c) {
    case Curve::tau1: return "tau1";
    case Curve::eta1: return "eta1";
    case Curve::eta2: return "eta2";
    case Curve::eta3: return "eta3";
  }
  return "?";
}

Curve parse_curve(const std::string& text) {
  if (text == "tau1") return Curve::tau1;
  if (text == "eta1") return Curve::eta1;
  if (text == "eta2") return Curve::eta2;
  if (text == "eta3") return Curve::eta3;
  throw Error(ErrorKind::usage, "curve: expected tau1, eta1, eta2 or eta3, got '" + text + "'");
}

CurveSamples curve_samples(Curve curve, double mu_min, double mu_max, const DomainConstants& k, int count) {
  k.validate();
  if (count < 2) throw Error(ErrorKind::usage, "curve_count: must be at least 2");
  if (!(mu_min < mu_max) || !(mu_max < 0.0)) {
    throw Error(ErrorKind::usage, "mu range: curves need mu_min < mu_max < 0");
  }
  const int n = k.dim;
  const double sn = std::pow(k.S, n / 2.0);
  CurveSamples out;
  for (int i = 0; i < count; ++i) {
    const double mu = mu_min + (mu_max - mu_min) * i / (count - 1);
    double lambda = 0.0;
    switch (curve) {
      case Curve::tau1: {
        const double q = (n - 2.0) * mu / 2.0;
        lambda = k.lambda1 + q - q * std::log(-q);
        break;
      }
      case Curve::eta1: {
        const double base = -n * mu * k.volume / (2.0 * sn);
        if (!(base > 0.0 && base <= 1.0)) {
          char buf[96];
          std::snprintf(buf, sizeof buf, "eta1: mu = %.6g skipped, base %.6g outside (0, 1]", mu, base);
          out.notes.emplace_back(buf);
          continue;
        }
        lambda = k.lambda1 * (1.0 - std::pow(base, 2.0 / n));
        break;
      }
      case Curve::eta2: lambda = -mu * std::log(-2.0 * sn / (n * mu * k.volume)); break;
      case Curve::eta3: lambda = mu * std::log(k.rho_max * k.rho_max / 32.0); break;
    }
    out.samples.push_back({curve, mu, lambda});
  }
  return out;
}

double curve_residual(const CurveSample& s, const DomainConstants& k) {
  const Params p{s.lambda, s.mu, k.dim};
  const RuleMargins m = rule_margins(p, k);
  const double sn = std::pow(k.S, k.dim / 2.0);
  switch (s.curve) {
    case Curve::tau1: return std::abs(m.nonexistence) / std::max(1.0, k.lambda1);
    case Curve::eta1: return std::abs(m.alpha_b0) / (sn / k.dim);
    case Curve::eta2: return std::abs(m.alpha_c0) / (sn / k.dim);
    case Curve::eta3: return std::abs(m.eta3) / (k.rho_max * k.rho_max);
  }
  return 0.0;
}

std::vector<PhaseCell> phase_diagram(const DomainConstants& k, Range lambda, Range mu, int res) {
  k.validate();
  if (res < 2) throw Error(ErrorKind::usage, "lattice: must be at least 2");
  std::vector<PhaseCell> cells;
  cells.reserve(static_cast<std::size_t>(res) * static_cast<std::size_t>(res));
  for (int j = 0; j < res; ++j) {
    const double m = mu.lo + (mu.hi - mu.lo) * j / (res - 1);
    for (int i = 0; i < res; ++i) {
      const double l = lambda.lo + (lambda.hi - lambda.lo) * i / (res - 1);
      PhaseCell c;
      c.lambda = l;
      c.mu = m;
      c.verdict = classify(Params{l, m, k.dim}, k);
      cells.push_back(std::move(c));
    }
  }
  return cells;
}

void confirm_cells(std::vector<PhaseCell>& cells, const Grid& grid, const MPConfig& cfg, int budget,
                   const SpectralPair* eig) {
  if (budget <= 0 || cells.empty()) return;
  const std::size_t stride = std::max<std::size_t>(1, (cells.size() + budget - 1) / static_cast<std::size_t>(budget));
  for (std::size_t i = 0; i < cells.size(); i += stride) {
    PhaseCell& c = cells[i];
    const Params p{c.lambda, c.mu, grid.dim};
    c.confirmed = true;
    try {
      const MPResult r = mountain_pass_solve(grid, p, cfg, eig);
      c.observed = to_string(r.status);
      const bool found = r.status == MPStatus::converged && positivity_check(grid, r.u);
      if (is_existence(c.verdict.label)) c.agrees = found;
      if (c.verdict.label == RegionLabel::nonexistence_T14) c.agrees = !found;
    } catch (const Error& e) {
      c.observed = std::string("error:") + to_string(e.kind());
      if (c.verdict.label != RegionLabel::unknown) c.agrees = false;
    }
  }
}

namespace {
std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace

void write_phase_csv(const std::string& path, const std::vector<PhaseCell>& cells) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path);
  const bool confirm = std::any_of(cells.begin(), cells.end(), [](const PhaseCell& c) { return c.confirmed; });
  out << "lambda,mu,label,basis,margin";
  if (confirm) out << ",observed,agrees";
  out << '\n';
  for (const auto& c : cells) {
    out << num(c.lambda) << ',' << num(c.mu) << ',' << to_string(c.verdict.label) << ',' << c.verdict.basis << ','
        << num(c.verdict.margin);
    if (confirm) {
      out << ',' << c.observed << ',';
      if (c.agrees) out << (*c.agrees ? "yes" : "no");
    }
    out << '\n';
  }
  if (!out) throw Error(ErrorKind::io, "write failed: " + path);
}

void write_curves_csv(const std::string& path, const std::vector<CurveSample>& samples) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path);
  out << "curve,mu,lambda\n";
  for (const auto& s : samples) out << to_string(s.curve) << ',' << num(s.mu) << ',' << num(s.lambda) << '\n';
  if (!out) throw Error(ErrorKind::io, "write failed: " + path);
}

std::vector<PhaseCell> read_phase_csv(const std::string& path) {
  const CsvTable t = read_csv(path);
  const bool confirm = std::find(t.header.begin(), t.header.end(), "observed") != t.header.end();
  std::vector<PhaseCell> cells;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    PhaseCell c;
    c.lambda = t.number(i, "lambda");
    c.mu = t.number(i, "mu");
    c.verdict.label = parse_region_label(t.rows[i][t.column("label")]);
    c.verdict.basis = t.rows[i][t.column("basis")];
    c.verdict.margin = t.number(i, "margin");
    if (confirm) {
      c.observed = t.rows[i][t.column("observed")];
      c.confirmed = !c.observed.empty();
      const std::string& a = t.rows[i][t.column("agrees")];
      if (a == "yes") c.agrees = true;
      if (a == "no") c.agrees = false;
    }
    cells.push_back(std::move(c));
  }
  return cells;
}

std::vector<CurveSample> read_curves_csv(const std::string& path) {
  const CsvTable t = read_csv(path);
  std::vector<CurveSample> out;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    out.push_back({parse_curve(t.rows[i][t.column("curve")]), t.number(i, "mu"), t.number(i, "lambda")});
  }
  return out;
}

}  // namespace logbn
