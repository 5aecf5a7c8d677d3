#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <span>
#include <vector>

#include "logbn/errors.hpp"

namespace logbn::quad {

inline constexpr double default_tol = 1e-13;

/// Adaptive 31-point Gauss–Kronrod on [a, b].
template <typename F>
double interval(F&& f, double a, double b, double tol = default_tol) {
  if (!(b > a)) return 0.0;
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 12, tol, &err);
  if (!std::isfinite(v)) throw Error(ErrorKind::accuracy, "quadrature produced a non-finite value");
  return v;
}

/// ∫_a^b f with breakpoints at scale·2^k, for integrands concentrated at
/// r ≈ scale near the origin.
template <typename F>
double concentrated(F&& f, double a, double b, double scale, double tol = default_tol) {
  double total = 0.0;
  double left = a;
  double knot = scale / 64.0;
  while (knot <= left) knot *= 2.0;
  while (knot < b) {
    total += interval(f, left, knot, tol);
    left = knot;
    knot *= 2.0;
  }
  total += interval(f, left, b, tol);
  return total;
}

/// ∫_a^∞ f for a > 0 and algebraically decaying f, through r = a/s.
template <typename F>
double tail(F&& f, double a, double tol = default_tol) {
  return interval([&](double s) { return f(a / s) * a / (s * s); }, 0.0, 1.0, tol);
}

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
};

/// Least-squares line y ≈ intercept + slope·x.
inline LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LinearFit fit;
  fit.slope = sxx > 0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    fit.max_residual = std::max(fit.max_residual, std::abs(y[i] - fit.intercept - fit.slope * x[i]));
  }
  return fit;
}

}  // namespace logbn::quad
