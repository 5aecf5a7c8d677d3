#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "logbn/constants.hpp"
#include "logbn/functional.hpp"
#include "logbn/verify.hpp"

using namespace logbn;
using std::numbers::pi;

namespace {

Grid cube(int dim, double res) {
  DomainSpec s;
  s.dim = dim;
  s.resolution = res;
  return build_grid(s);
}

// πN(N−2)(Γ(N/2)/Γ(N))^{2/N}
double sobolev_closed_form(int n) {
  return pi * n * (n - 2) * std::pow(std::tgamma(n / 2.0) / std::tgamma(n), 2.0 / n);
}

// Smallest eigenvalue of the 2N+1 stencil on the unit cube: N·(4/h²)sin²(πh/2).
double lattice_eigenvalue(int n, double res) {
  const double h = 1.0 / res;
  return n * 4.0 / (h * h) * std::pow(std::sin(pi * h / 2), 2);
}

}  // namespace

TEST_CASE("first eigenvalue on cubes") {
  const Grid g3 = cube(3, 48);
  const SpectralPair e3 = first_eigenpair(g3, 1e-6);
  CHECK(std::abs(e3.lambda1 - 3 * pi * pi) / (3 * pi * pi) < 0.01);
  CHECK(e3.lambda1 == doctest::Approx(lattice_eigenvalue(3, 48)).epsilon(1e-8));
  CHECK(e3.lambda1 == doctest::Approx(29.598245).epsilon(1e-7));
  CHECK(e3.residual <= 1e-6);
  CHECK(e3.phi1.minCoeff() > 0.0);
  CHECK(l2_norm(g3, e3.phi1) == doctest::Approx(1.0).epsilon(1e-12));
  const double res = l2_norm(g3, Field(laplacian_apply(g3, e3.phi1) - e3.lambda1 * e3.phi1)) / e3.lambda1;
  CHECK(res <= 1e-6);

  const Grid g4 = cube(4, 24);
  const SpectralPair e4 = first_eigenpair(g4, 1e-6);
  CHECK(std::abs(e4.lambda1 - 4 * pi * pi) / (4 * pi * pi) < 0.02);
  CHECK(e4.lambda1 == doctest::Approx(lattice_eigenvalue(4, 24)).epsilon(1e-8));
}

TEST_CASE("eigenvalue error shrinks like h^2") {
  double err[2];
  int k = 0;
  for (double res : {12.0, 24.0}) {
    const SpectralPair e = first_eigenpair(cube(3, res), 1e-8);
    err[k++] = std::abs(e.lambda1 - 3 * pi * pi);
  }
  CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("eigenpair on a ball without the sine-transform path") {
  DomainSpec s;
  s.kind = DomainKind::ball;
  s.dim = 3;
  s.extents = {0.5};
  s.resolution = 24;
  const Grid g = build_grid(s);
  const SpectralPair e = first_eigenpair(g, 1e-6);
  // j_{1/2,1}² / r² = π² / 0.25 for the 3-ball; the staircase boundary is O(h).
  CHECK(std::abs(e.lambda1 - 4 * pi * pi) / (4 * pi * pi) < 0.1);
  CHECK(e.phi1.minCoeff() > 0.0);
}

TEST_CASE("eigen tolerance range") {
  const Grid g = cube(3, 8);
  CHECK_THROWS_AS(first_eigenpair(g, 1e-3), Error);
  CHECK_THROWS_AS(first_eigenpair(g, 0.0), Error);
}

TEST_CASE("Sobolev constant against the closed form") {
  // The r^{-2} tail of the N = 3 integrand is truncated.
  CHECK(sobolev_constant(3).S == doctest::Approx(sobolev_closed_form(3)).epsilon(1e-7));
  CHECK(sobolev_constant(4).S == doctest::Approx(sobolev_closed_form(4)).epsilon(1e-8));
  CHECK(sobolev_constant(5).S == doctest::Approx(sobolev_closed_form(5)).epsilon(1e-8));
  CHECK(sobolev_constant(4).S == doctest::Approx(10.2603986).epsilon(1e-7));
  CHECK(sobolev_constant(3).S == doctest::Approx(5.4779038).epsilon(1e-7));
  CHECK_THROWS_AS(sobolev_constant(6), Error);
}

TEST_CASE("instanton quotient is scale invariant") {
  for (int n : {3, 4, 5}) {
    const double a = sobolev_quotient(n, 0.1);
    const double b = sobolev_quotient(n, 1.0);
    const double c = sobolev_quotient(n, 10.0);
    CHECK(a == doctest::Approx(b).epsilon(1e-8));
    CHECK(c == doctest::Approx(b).epsilon(1e-8));
  }
}

TEST_CASE("sphere areas") {
  CHECK(sphere_area(3) == doctest::Approx(4 * pi));
  CHECK(sphere_area(4) == doctest::Approx(2 * pi * pi));
  CHECK(sphere_area(5) == doctest::Approx(8 * pi * pi / 3));
}

TEST_CASE("log-Sobolev inequality on smooth positive fields") {
  const Grid g = cube(3, 16);
  const SpectralPair e = first_eigenpair(g, 1e-6);
  std::mt19937_64 rng(4);
  const Field bump = random_smooth_field(g, rng, true);
  for (double a : {0.5, 1.0, 2.0}) {
    for (const Field* u : {&e.phi1, &bump}) {
      const auto r = log_sobolev_check(g, *u, a);
      CHECK(r.holds);
      CHECK(r.lhs <= r.rhs);
    }
  }
  // Both sides by hand for φ₁ (unit mass), a = 1.
  const auto r = log_sobolev_check(g, e.phi1, 1.0);
  double lhs = 0.0;
  for (Index i = 0; i < g.size(); ++i) lhs += detail::xlogx2(e.phi1(i));
  lhs *= g.cell_volume();
  CHECK(r.lhs == doctest::Approx(lhs).epsilon(1e-12));
  CHECK(r.rhs == doctest::Approx(e.lambda1 / pi - 3.0).epsilon(1e-6));

  try {
    log_sobolev_check(g, Field::Zero(g.size()), 1.0);
    FAIL("expected an error");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::invalid_field);
  }
  CHECK_THROWS_AS(log_sobolev_check(g, e.phi1, -1.0), Error);
}
