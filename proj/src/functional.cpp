#include "logbn/functional.hpp"

#include <boost/math/tools/roots.hpp>

#include <vector>

namespace logbn {

void Params::validate() const {
  if (dim < 3 || dim > 5) {
    throw Error(ErrorKind::usage, "N: dimension must be 3, 4 or 5, got " + std::to_string(dim));
  }
  if (!std::isfinite(lambda)) throw Error(ErrorKind::usage, "lambda: must be finite");
  if (!std::isfinite(mu)) throw Error(ErrorKind::usage, "mu: must be finite");
}

double fiber_energy(const FiberIntegrals& f, const Params& p, double t) {
  const double t2 = t * t;
  const double ts = p.two_star();
  return 0.5 * t2 * f.gradient - std::pow(t, ts) / ts * f.critical - 0.5 * p.lambda * t2 * f.mass -
         0.5 * p.mu * t2 * (f.log_mass + f.mass * std::log(t2) - f.mass);
}

double fiber_slope(const FiberIntegrals& f, const Params& p, double t) {
  return f.gradient - std::pow(t, p.two_star() - 2.0) * f.critical - p.lambda * f.mass -
         p.mu * f.log_mass - p.mu * f.mass * std::log(t * t);
}

NehariProjection nehari_project(const FiberIntegrals& f, const Params& p) {
  if (!(f.critical > 0.0) && !(f.mass > 0.0)) {
    throw Error(ErrorKind::bracket, "nehari projection: u+ vanishes identically");
  }
  constexpr double log_lo = -8.0 * 2.302585092994046;
  constexpr double log_hi = 8.0 * 2.302585092994046;
  constexpr int samples = 321;
  auto phi = [&](double x) { return fiber_slope(f, p, std::exp(x)); };

  std::vector<double> xs(samples), vals(samples);
  for (int i = 0; i < samples; ++i) {
    xs[static_cast<std::size_t>(i)] = log_lo + (log_hi - log_lo) * i / (samples - 1);
    vals[static_cast<std::size_t>(i)] = phi(xs[static_cast<std::size_t>(i)]);
  }
  int changes = 0;
  int last = -1;
  for (int i = 0; i + 1 < samples; ++i) {
    const bool a = vals[static_cast<std::size_t>(i)] > 0.0;
    const bool b = vals[static_cast<std::size_t>(i) + 1] > 0.0;
    if (a != b) {
      ++changes;
      if (a && !b) last = i;
    }
  }
  if (last < 0) {
    throw Error(ErrorKind::bracket, "nehari projection: g(tu) has no sign change in [1e-8, 1e8]");
  }
  double lo = xs[static_cast<std::size_t>(last)];
  double hi = xs[static_cast<std::size_t>(last) + 1];
  if (vals[static_cast<std::size_t>(last) + 1] == 0.0) {
    return {std::exp(hi), changes > 1, changes};
  }
  boost::uintmax_t iters = 200;
  auto tol = [](double a, double b) { return std::abs(b - a) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(a)); };
  const auto [x0, x1] = boost::math::tools::toms748_solve(phi, lo, hi, vals[static_cast<std::size_t>(last)],
                                                          vals[static_cast<std::size_t>(last) + 1], tol, iters);
  const double x = std::abs(phi(x0)) <= std::abs(phi(x1)) ? x0 : x1;
  return {std::exp(x), changes > 1, changes};
}

}  // namespace logbn
