#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "logbn/functional.hpp"
#include "logbn/verify.hpp"

using namespace logbn;

namespace {

Grid cube(int dim, double res) {
  DomainSpec s;
  s.dim = dim;
  s.resolution = res;
  return build_grid(s);
}

double fd_relative_error(const Grid& g, const Params& p, const Field& u, const Field& v) {
  constexpr double delta = 1e-5;
  const double fd =
      (energy(g, p, Field(u + delta * v)).total - energy(g, p, Field(u - delta * v)).total) / (2 * delta);
  const double an = integrate(g, gradient(g, p, u).cwiseProduct(v));
  return std::abs(fd - an) / std::max({std::abs(fd), std::abs(an), 1e-12});
}

}  // namespace

TEST_CASE("energy of the zero field") {
  const Grid g = cube(3, 8);
  const auto e = energy(g, Params{1.0, -2.0, 3}, Field::Zero(g.size()));
  CHECK(e.total == 0.0);
  CHECK(gradient(g, Params{1.0, -2.0, 3}, Field::Zero(g.size())).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("energy of a constant field by hand") {
  // Pointwise terms on u ≡ c, N = 4 (2* = 4).
  const Grid g = cube(4, 8);
  const double c = 0.7;
  const Params p{2.0, 0.5, 4};
  const Field u = Field::Constant(g.size(), c);
  const auto e = energy(g, p, u);
  const double vol = g.volume;
  CHECK(e.critical == doctest::Approx(std::pow(c, 4) / 4 * vol));
  CHECK(e.quadratic == doctest::Approx(1.0 * c * c * vol));
  CHECK(e.logarithmic == doctest::Approx(0.25 * c * c * (std::log(c * c) - 1) * vol));
  CHECK(e.dirichlet == doctest::Approx(0.5 * integrate(g, u.cwiseProduct(laplacian_apply(g, u)))));
}

TEST_CASE("negative part only enters through the Dirichlet term") {
  const Grid g = cube(3, 8);
  std::mt19937_64 rng(11);
  const Field u = -random_smooth_field(g, rng, true);
  const auto e = energy(g, Params{3.0, -1.0, 3}, u);
  CHECK(e.critical == 0.0);
  CHECK(e.quadratic == 0.0);
  CHECK(e.logarithmic == 0.0);
  CHECK(e.total == doctest::Approx(e.dirichlet));
}

TEST_CASE("gradient against central differences") {
  for (int dim : {3, 4}) {
    const Grid g = cube(dim, dim == 3 ? 12 : 8);
    std::mt19937_64 rng(100 + dim);
    for (const auto& [lambda, mu] : {std::pair{0.0, 1.0}, std::pair{5.0, -1.0}, std::pair{-3.0, 2.0}}) {
      const Params p{lambda, mu, dim};
      for (int trial = 0; trial < 5; ++trial) {
        const Field u = random_smooth_field(g, rng, false);
        const Field v = random_smooth_field(g, rng, false);
        CHECK(fd_relative_error(g, p, u, v) <= 1e-4);
      }
    }
  }
}

TEST_CASE("Nehari functional equals the pairing with the gradient") {
  const Grid g = cube(3, 12);
  std::mt19937_64 rng(5);
  const Params p{1.0, 0.5, 3};
  for (int trial = 0; trial < 5; ++trial) {
    const Field u = random_smooth_field(g, rng, false);
    const double a = nehari_g(g, p, u);
    const double b = integrate(g, gradient(g, p, u).cwiseProduct(u));
    CHECK(std::abs(a - b) <= 1e-8 * std::max(1.0, std::abs(a)));
  }
}

TEST_CASE("fiber energy and slope agree with direct evaluation") {
  const Grid g = cube(4, 8);
  std::mt19937_64 rng(9);
  const Field u = random_smooth_field(g, rng, true);
  const Params p{3.0, -0.7, 4};
  const auto f = fiber_integrals(g, u);
  for (double t : {0.1, 0.8, 2.5}) {
    CHECK(fiber_energy(f, p, t) == doctest::Approx(energy(g, p, Field(t * u)).total).epsilon(1e-11));
    CHECK(fiber_slope(f, p, t) == doctest::Approx(nehari_g(g, p, Field(t * u)) / (t * t)).epsilon(1e-10));
  }
}

TEST_CASE("Nehari projection lands on g = 0") {
  const Grid g = cube(4, 8);
  std::mt19937_64 rng(21);
  const Field u = random_smooth_field(g, rng, true);
  for (const Params& p : {Params{0.0, 1.0, 4}, Params{-5.0, 1.0, 4}, Params{10.0, -1.0, 4}}) {
    const auto proj = nehari_project(g, p, u);
    const Field w = proj.t * u;
    const double scale = integrate(g, w.cwiseProduct(laplacian_apply(g, w)));
    CHECK(std::abs(nehari_g(g, p, w)) <= 1e-10 * scale);
    // The largest root is where the fiber leaves the manifold downhill.
    CHECK(fiber_slope(fiber_integrals(g, u), p, 1.01 * proj.t) < 0.0);
  }
  CHECK_THROWS_AS(nehari_project(g, Params{0.0, 1.0, 4}, Field(-u)), Error);
}

TEST_CASE("on the Nehari manifold with lambda = mu = 0 the energy is (1/N) of the critical integral") {
  const Grid g = cube(3, 10);
  std::mt19937_64 rng(2);
  const Params p{0.0, 0.0, 3};
  const Field u = random_smooth_field(g, rng, true);
  const Field w = nehari_project(g, p, u).t * u;
  const auto f = fiber_integrals(g, w);
  CHECK(energy(g, p, w).total == doctest::Approx(f.critical / 3.0).epsilon(1e-10));
}

TEST_CASE("non-finite fields are rejected") {
  const Grid g = cube(3, 8);
  Field u = Field::Ones(g.size());
  u(3) = std::numeric_limits<double>::quiet_NaN();
  try {
    energy(g, Params{0.0, 1.0, 3}, u);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::invalid_field);
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(Params({0.0, 1.0, 2}).validate(), Error);
  CHECK_THROWS_AS(Params({std::nan(""), 1.0, 3}).validate(), Error);
  CHECK_NOTHROW(Params({0.0, 1.0, 5}).validate());
  CHECK(Params({0.0, 0.0, 4}).two_star() == 4.0);
  CHECK(Params({0.0, 0.0, 3}).two_star() == 6.0);
}
