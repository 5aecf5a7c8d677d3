#include "logbn/constants.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "logbn/functional.hpp"
#include "logbn/poisson.hpp"
#include "logbn/quadrature.hpp"
#include "logbn/testfunctions.hpp"

namespace logbn {

double sphere_area(int dim) {
  return 2.0 * std::pow(std::numbers::pi, dim / 2.0) / boost::math::tgamma(dim / 2.0);
}

SpectralPair first_eigenpair(const Grid& grid, double tol, int max_iter) {
  if (!(tol > 0.0) || tol > 1e-4) throw Error(ErrorKind::usage, "eigen_tol: must lie in (0, 1e-4]");
  PoissonSolver poisson(grid, 1e-2 * tol);

  Field x = Field::Ones(grid.size());
  x /= l2_norm(grid, x);
  double lambda = 0.0;
  double residual = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= max_iter; ++it) {
    const Field guess = lambda > 0.0 ? Field(x / lambda) : Field(Field::Zero(grid.size()));
    Field y = poisson.solve(x, guess);
    y /= l2_norm(grid, y);
    const Field ly = laplacian_apply(grid, y);
    lambda = integrate(grid, y.cwiseProduct(ly));
    residual = l2_norm(grid, ly - lambda * y) / lambda;
    x = std::move(y);
    if (residual <= tol) {
      if (x.sum() < 0.0) x = -x;
      return {lambda, std::move(x), residual, it};
    }
  }
  throw ConvergenceError("first_eigenpair: no convergence after " + std::to_string(max_iter) +
                             " iterations",
                         residual);
}

namespace {

// ∫_0^R f over a ray whose integrand peaks near r ≈ eps, with R the first
// radius eps·2^k beyond which f stays below 1e-14 of its peak.
template <typename F>
double truncated_ray(F&& f, double eps) {
  double peak = 0.0;
  for (int k = -40; k <= 40; ++k) peak = std::max(peak, std::abs(f(eps * std::pow(2.0, k / 4.0))));
  double r = eps;
  while (std::abs(f(r)) >= 1e-14 * peak || std::abs(f(2.0 * r)) >= 1e-14 * peak) {
    r *= 2.0;
    if (r > 1e30 * eps) throw Error(ErrorKind::accuracy, "instanton integrand does not decay");
  }
  return quad::concentrated(f, 0.0, r, eps);
}

}  // namespace

double sobolev_quotient(int dim, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorKind::usage, "eps: must be positive");
  const double ts = 2.0 * dim / (dim - 2.0);
  const double n1 = dim - 1.0;
  const double grad = truncated_ray(
      [&](double r) {
        const double d = instanton_slope(dim, eps, r);
        return d * d * std::pow(r, n1);
      },
      eps);
  const double crit = truncated_ray(
      [&](double r) { return std::pow(instanton(dim, eps, r), ts) * std::pow(r, n1); }, eps);
  return grad / std::pow(crit, 2.0 / ts);
}

SobolevConstant sobolev_constant(int dim) {
  if (dim < 3 || dim > 5) throw Error(ErrorKind::usage, "N: dimension must be 3, 4 or 5");
  const double s1 = sobolev_quotient(dim, 1.0);
  for (double eps : {0.1, 10.0}) {
    const double s = sobolev_quotient(dim, eps);
    if (std::abs(s - s1) > 1e-6 * s1) {
      throw Error(ErrorKind::accuracy, "Sobolev quotient varies with eps beyond 1e-6");
    }
  }
  // The ray quotient omits the common factor ω_N^{1 - 2/2*} = ω_N^{2/N}.
  return {dim, s1 * std::pow(sphere_area(dim), 2.0 / dim)};
}

LogSobolevReport log_sobolev_check(const Grid& grid, const Field& u, double a, double tol) {
  detail::check_shape(grid, u.size());
  detail::check_finite(u);
  if (!(a > 0.0)) throw Error(ErrorKind::usage, "a: must be positive");
  const double mass = integrate(grid, u.cwiseAbs2());
  if (!(mass > 0.0)) throw Error(ErrorKind::invalid_field, "log-Sobolev check needs a nonzero field");
  double lhs = 0.0;
  for (Index i = 0; i < u.size(); ++i) lhs += detail::xlogx2(std::abs(u(i)));
  lhs *= grid.cell_volume();
  const double dirichlet = integrate(grid, u.cwiseProduct(laplacian_apply(grid, u)));
  const double rhs = a / std::numbers::pi * dirichlet + (std::log(mass) - grid.dim * (1.0 + std::log(a))) * mass;
  return {lhs, rhs, lhs <= rhs + tol * std::max(1.0, std::abs(rhs))};
}

}  // namespace logbn
