#include "logbn/testfunctions.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>

#include "logbn/constants.hpp"
#include "logbn/io.hpp"
#include "logbn/quadrature.hpp"

namespace logbn {

double instanton(int dim, double eps, double r) {
  const double k = std::pow(dim * (dim - 2.0), (dim - 2.0) / 4.0);
  return k * std::pow(eps / (eps * eps + r * r), (dim - 2.0) / 2.0);
}

double instanton_slope(int dim, double eps, double r) {
  return -(dim - 2.0) * r * instanton(dim, eps, r) / (eps * eps + r * r);
}

const char* to_string(CutoffProfile profile) {
  switch (profile) {
    case CutoffProfile::generic: return "generic";
    case CutoffProfile::radial_n4: return "radial_N4";
    case CutoffProfile::radial_n3: return "radial_N3";
  }
  return "?";
}

CutoffProfile default_profile(int dim) {
  if (dim == 3) return CutoffProfile::radial_n3;
  if (dim == 4) return CutoffProfile::radial_n4;
  return CutoffProfile::generic;
}

void CutoffSpec::validate() const {
  if (!(rho > 0.0)) throw Error(ErrorKind::usage, "rho: must be positive");
  if (profile == CutoffProfile::radial_n3 && !(4.0 * rho * rho < 1.0)) {
    throw Error(ErrorKind::usage, "rho: the N=3 cutoff needs 4 rho^2 < 1");
  }
  if (profile == CutoffProfile::radial_n4 && rho > 1.0) {
    throw Error(ErrorKind::usage, "rho: the N=4 cutoff needs rho <= 1");
  }
}

double cutoff(double rho, double r) {
  if (r <= rho) return 1.0;
  if (r >= 2.0 * rho) return 0.0;
  const double x = (r - rho) / rho;
  return 1.0 - x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
}

double cutoff_slope(double rho, double r) {
  if (r <= rho || r >= 2.0 * rho) return 0.0;
  const double x = (r - rho) / rho;
  return -30.0 * x * x * (1.0 - x) * (1.0 - x) / rho;
}

Field test_function(const Grid& grid, const CutoffSpec& cut, double eps) {
  cut.validate();
  if (!(eps > 0.0)) throw Error(ErrorKind::usage, "eps: must be positive");
  if (eps < 4.0 * grid.h) {
    throw Error(ErrorKind::resolution, "eps below 4h: the instanton peak is not resolved on this grid");
  }
  std::vector<double> c = cut.center;
  if (c.empty()) {
    for (int a = 0; a < grid.dim; ++a) {
      c.push_back(grid.origin[static_cast<std::size_t>(a)] +
                  0.5 * (grid.dims[static_cast<std::size_t>(a)] - 1) * grid.h);
    }
  }
  if (static_cast<int>(c.size()) != grid.dim) throw Error(ErrorKind::usage, "center: wrong dimension");

  // B(c, 2ρ) must avoid every non-interior lattice node.
  const double reach = 2.0 * cut.rho;
  const auto total = static_cast<Index>(grid.mask.size());
  for (Index n = 0; n < total; ++n) {
    if (grid.lattice_to_interior[static_cast<std::size_t>(n)] >= 0) continue;
    const auto q = grid.lattice_coords(n);
    double d2 = 0.0;
    for (int a = 0; a < grid.dim; ++a) {
      const double x = grid.origin[static_cast<std::size_t>(a)] + q[static_cast<std::size_t>(a)] * grid.h -
                       c[static_cast<std::size_t>(a)];
      d2 += x * x;
    }
    if (d2 < reach * reach) throw Error(ErrorKind::usage, "rho: B(center, 2 rho) is not inside the domain");
  }

  Field u(grid.size());
  for (Index i = 0; i < grid.size(); ++i) {
    const double r = grid.distance(i, c);
    u(i) = cutoff(cut.rho, r) * instanton(grid.dim, eps, r);
  }
  return u;
}

RadialIntegrals radial_integrals(int dim, double rho, double eps) {
  if (!(eps > 0.0) || !(rho > 0.0)) throw Error(ErrorKind::usage, "eps and rho must be positive");
  const double omega = sphere_area(dim);
  const double ts = 2.0 * dim / (dim - 2.0);
  const double n1 = dim - 1.0;
  auto big_u = [&](double r) { return cutoff(rho, r) * instanton(dim, eps, r); };
  auto big_du = [&](double r) {
    return cutoff_slope(rho, r) * instanton(dim, eps, r) + cutoff(rho, r) * instanton_slope(dim, eps, r);
  };
  const double outer = 2.0 * rho;

  RadialIntegrals out;
  out.eps = eps;
  out.gradient = omega * quad::concentrated([&](double r) {
    const double d = big_du(r);
    return d * d * std::pow(r, n1);
  }, 0.0, outer, eps);
  out.critical = omega * quad::concentrated(
                             [&](double r) { return std::pow(big_u(r), ts) * std::pow(r, n1); }, 0.0, outer, eps);
  out.mass = omega * quad::concentrated([&](double r) {
    const double v = big_u(r);
    return v * v * std::pow(r, n1);
  }, 0.0, outer, eps);
  out.log_mass = omega * quad::concentrated(
                             [&](double r) { return detail::xlogx2(big_u(r)) * std::pow(r, n1); }, 0.0, outer, eps);

  const double grad_shell = quad::interval([&](double r) {
    const double d = big_du(r);
    const double s = instanton_slope(dim, eps, r);
    return (d * d - s * s) * std::pow(r, n1);
  }, rho, outer);
  const double grad_tail = quad::tail([&](double r) {
    const double s = instanton_slope(dim, eps, r);
    return s * s * std::pow(r, n1);
  }, outer);
  out.gradient_excess = omega * (grad_shell - grad_tail);

  const double crit_shell = quad::interval([&](double r) {
    return (std::pow(big_u(r), ts) - std::pow(instanton(dim, eps, r), ts)) * std::pow(r, n1);
  }, rho, outer);
  const double crit_tail = quad::tail(
      [&](double r) { return std::pow(instanton(dim, eps, r), ts) * std::pow(r, n1); }, outer);
  out.critical_excess = omega * (crit_shell - crit_tail);
  return out;
}

double n3_mass_constant(double rho) {
  const double phi2 = quad::interval([&](double r) {
    const double v = cutoff(rho, r);
    return v * v;
  }, 0.0, 2.0 * rho);
  return std::sqrt(3.0) * sphere_area(3) * phi2;
}

bool AsymptoticsReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const AsymptoticCheck& c) { return c.pass; });
}

namespace {

AsymptoticCheck within(std::string name, double measured, double expected, double rel_tol, std::string note = {}) {
  AsymptoticCheck c{std::move(name), measured, expected, rel_tol, false, std::move(note)};
  c.pass = std::isfinite(measured) && std::abs(measured - expected) <= rel_tol * std::abs(expected);
  return c;
}

// Intercept of y ≈ C + D / log(1/ε).
double log_extrapolate(const std::vector<double>& eps, const std::vector<double>& y) {
  std::vector<double> x;
  for (double e : eps) x.push_back(1.0 / std::log(1.0 / e));
  return quad::linear_fit(x, y).intercept;
}

}  // namespace

AsymptoticsReport asymptotics_report(const CutoffSpec& cut, int dim, const std::vector<double>& eps_list) {
  if (dim < 3 || dim > 5) throw Error(ErrorKind::usage, "N: dimension must be 3, 4 or 5");
  cut.validate();
  if (eps_list.size() < 3) throw Error(ErrorKind::usage, "eps: need at least 3 values");
  for (std::size_t i = 0; i + 1 < eps_list.size(); ++i) {
    if (!(eps_list[i + 1] < eps_list[i]) || !(eps_list[i + 1] > 0.0)) {
      throw Error(ErrorKind::usage, "eps: values must be positive and strictly decreasing");
    }
  }
  if (eps_list.front() < 4.0 * eps_list.back()) {
    throw Error(ErrorKind::usage, "eps: values must span a factor of at least 4");
  }

  AsymptoticsReport rep;
  rep.dim = dim;
  rep.rho = cut.rho;
  const double rho = cut.rho;
  const double omega = sphere_area(dim);
  std::vector<double> log_eps, log_excess;
  for (double e : eps_list) {
    rep.rows.push_back(radial_integrals(dim, rho, e));
    log_eps.push_back(std::log(e));
    log_excess.push_back(std::log(std::abs(rep.rows.back().gradient_excess)));
  }

  const bool excess_positive = std::all_of(rep.rows.begin(), rep.rows.end(),
                                           [](const RadialIntegrals& r) { return r.gradient_excess > 0.0; });
  {
    const double slope = quad::linear_fit(log_eps, log_excess).slope;
    auto c = within("gradient_excess_slope", slope, dim - 2.0, 0.2 / (dim - 2.0));
    c.tolerance = 0.2;
    c.pass = c.pass && excess_positive;
    if (!excess_positive) c.note = "gradient excess not positive";
    rep.checks.push_back(c);
  }

  auto column = [&](auto&& f) {
    std::vector<double> v;
    for (const auto& r : rep.rows) v.push_back(f(r));
    return v;
  };

  if (dim >= 5) {
    rep.ratio_names = {"log_mass_over_eps2_log"};
    auto ratio = column([](const RadialIntegrals& r) { return r.log_mass / (r.eps * r.eps * std::log(1.0 / r.eps)); });
    rep.ratios = {ratio};
    const double c0 = log_extrapolate(eps_list, ratio);
    AsymptoticCheck c{"log_mass_constant_positive", c0, 0.0, 0.0, false, "fitted limit must be positive"};
    c.pass = c0 > 0.0 && std::all_of(ratio.begin(), ratio.end(), [](double v) { return v > 0.0; });
    rep.checks.push_back(c);
  } else if (dim == 4) {
    rep.ratio_names = {"mass_over_eps2_log", "log_mass_over_eps2_log", "bracket_lower", "bracket_upper"};
    auto mass = column([](const RadialIntegrals& r) { return r.mass / (r.eps * r.eps * std::log(1.0 / r.eps)); });
    auto logm = column([](const RadialIntegrals& r) { return r.log_mass / (r.eps * r.eps * std::log(1.0 / r.eps)); });
    auto lower = column([&](const RadialIntegrals& r) {
      const double e2 = r.eps * r.eps, p2 = rho * rho;
      return 8.0 * std::log(8.0 * (e2 + p2) / (std::numbers::e * (e2 + 4.0 * p2) * (e2 + 4.0 * p2))) * omega;
    });
    auto upper = column([&](const RadialIntegrals& r) {
      const double e2 = r.eps * r.eps, p2 = rho * rho;
      return 8.0 * std::log(8.0 * std::numbers::e * (e2 + 4.0 * p2) / ((e2 + p2) * (e2 + p2))) * omega;
    });
    rep.ratios = {mass, logm, lower, upper};
    rep.checks.push_back(within("mass_coefficient_limit", log_extrapolate(eps_list, mass), 8.0 * omega, 0.10));
    bool inside = true;
    int counted = 0;
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
      if (eps_list[i] > 0.05) continue;
      ++counted;
      worst = std::min({worst, logm[i] - lower[i], upper[i] - logm[i]});
      inside = inside && logm[i] >= lower[i] && logm[i] <= upper[i];
    }
    AsymptoticCheck c{"log_mass_bracket", worst, 0.0, 0.0, inside && counted > 0,
                 counted > 0 ? "smallest distance to a bracket end, eps <= 0.05" : "no eps <= 0.05 supplied"};
    rep.checks.push_back(c);
  } else {
    const double k = n3_mass_constant(rho);
    rep.ratio_names = {"mass_over_eps", "log_mass_over_eps_log"};
    auto mass = column([](const RadialIntegrals& r) { return r.mass / r.eps; });
    auto logm = column([](const RadialIntegrals& r) { return r.log_mass / (r.eps * std::log(r.eps)); });
    rep.ratios = {mass, logm};
    double spread = 0.0;
    for (double m : mass) spread = std::max(spread, std::abs(m - k) / k);
    auto stable = within("mass_over_eps_all", k * (1.0 + spread), k, 0.05, "largest deviation over eps");
    rep.checks.push_back(stable);
    rep.checks.push_back(within("mass_over_eps_limit", log_extrapolate(eps_list, mass), k, 0.05));
    rep.checks.push_back(within("log_mass_limit", log_extrapolate(eps_list, logm), k, 0.05));
  }
  return rep;
}

void write_asymptotics_csv(const std::string& path, const AsymptoticsReport& rep) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path);
  out << std::setprecision(17);
  out << "eps,gradient,critical,mass,log_mass,gradient_excess,critical_excess";
  for (const auto& n : rep.ratio_names) out << ',' << n;
  for (const auto& c : rep.checks) out << ',' << c.name << ',' << c.name << "_pass";
  out << '\n';
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const auto& r = rep.rows[i];
    out << r.eps << ',' << r.gradient << ',' << r.critical << ',' << r.mass << ',' << r.log_mass << ','
        << r.gradient_excess << ',' << r.critical_excess;
    for (const auto& col : rep.ratios) out << ',' << col[i];
    for (const auto& c : rep.checks) out << ',' << c.measured << ',' << (c.pass ? 1 : 0);
    out << '\n';
  }
  if (!out) throw Error(ErrorKind::io, "write failed: " + path);
}

AsymptoticsReport read_asymptotics_csv(const std::string& path) {
  const CsvTable t = read_csv(path);
  static const std::vector<std::string> fixed{"eps", "gradient", "critical", "mass", "log_mass", "gradient_excess",
                                              "critical_excess"};
  AsymptoticsReport rep;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    RadialIntegrals r;
    r.eps = t.number(i, "eps");
    r.gradient = t.number(i, "gradient");
    r.critical = t.number(i, "critical");
    r.mass = t.number(i, "mass");
    r.log_mass = t.number(i, "log_mass");
    r.gradient_excess = t.number(i, "gradient_excess");
    r.critical_excess = t.number(i, "critical_excess");
    rep.rows.push_back(r);
  }
  auto has = [&](const std::string& n) { return std::find(t.header.begin(), t.header.end(), n) != t.header.end(); };
  for (std::size_t c = fixed.size(); c < t.header.size(); ++c) {
    const std::string& name = t.header[c];
    if (name.ends_with("_pass")) continue;
    if (has(name + "_pass")) {
      AsymptoticCheck chk;
      chk.name = name;
      if (!t.rows.empty()) {
        chk.measured = t.number(0, name);
        chk.pass = t.number(0, name + "_pass") != 0.0;
      }
      rep.checks.push_back(chk);
    } else {
      rep.ratio_names.push_back(name);
      std::vector<double> col;
      for (std::size_t i = 0; i < t.rows.size(); ++i) col.push_back(t.number(i, name));
      rep.ratios.push_back(std::move(col));
    }
  }
  return rep;
}

namespace {

// Minimizes f on a scanned log-t range, then polishes with Brent.
template <typename F>
std::pair<double, double> scan_minimum(F&& f, double lo, double hi, int samples) {
  int best = 0;
  double best_v = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const double x = lo + (hi - lo) * i / (samples - 1);
    const double v = f(x);
    if (v < best_v) {
      best_v = v;
      best = i;
    }
  }
  if (best == 0 || best == samples - 1) {
    throw Error(ErrorKind::bracket, "fiber maximum not interior to the scanned range");
  }
  const double step = (hi - lo) / (samples - 1);
  const double a = lo + (best - 1) * step;
  const double b = lo + (best + 1) * step;
  const auto [x, v] = boost::math::tools::brent_find_minima(f, a, b, std::numeric_limits<double>::digits / 2);
  return {x, v};
}

}  // namespace

FiberMax sup_t_energy(const FiberIntegrals& f, const Params& p) {
  if (!(f.critical > 0.0)) throw Error(ErrorKind::bracket, "sup_t_energy: U+ vanishes identically");
  const auto [x, v] = scan_minimum([&](double x) { return -fiber_energy(f, p, std::exp(x)); }, -18.0, 18.0, 1441);
  return {std::exp(x), -v};
}

FiberMax sup_t_energy(const Grid& grid, const Params& p, const Field& u) {
  return sup_t_energy(fiber_integrals(grid, u), p);
}

ThresholdMargin radial_threshold(const Params& p, double rho, double eps, double S) {
  p.validate();
  const int n = p.dim;
  const double ts = p.two_star();
  const RadialIntegrals ri = radial_integrals(n, rho, eps);
  const double k = std::pow(S, n / 2.0);
  const double a_ex = ri.gradient_excess;
  const double b_ex = ri.critical_excess;
  const double c = ri.mass, d = ri.log_mass;
  // K/N − I(tU) with t = e^x and 1/N = 1/2 − 1/2*.
  auto margin = [&](double x) {
    const double m0 = std::expm1(ts * x) / ts - std::expm1(2.0 * x) / 2.0;
    const double t2 = std::exp(2.0 * x);
    const double rest = 0.5 * t2 * (a_ex - p.lambda * c - p.mu * (d - c)) - std::exp(ts * x) / ts * b_ex -
                        0.5 * p.mu * c * t2 * (2.0 * x);
    return k * m0 - rest;
  };
  const auto [x, m] = scan_minimum(margin, -10.0, 10.0, 2001);
  ThresholdMargin out;
  out.eps = eps;
  out.t_star = std::exp(x);
  out.threshold = k / n;
  out.margin = m;
  out.level = out.threshold - m;
  return out;
}

}  // namespace logbn
