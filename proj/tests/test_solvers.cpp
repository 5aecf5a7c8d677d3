#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "logbn/constants.hpp"
#include "logbn/io.hpp"
#include "logbn/solvers.hpp"

using namespace logbn;

namespace {

Grid cube(int dim, double res) {
  DomainSpec s;
  s.dim = dim;
  s.resolution = res;
  return build_grid(s);
}

struct N4Fixture {
  Grid grid = cube(4, 16);
  SpectralPair eig = first_eigenpair(grid, 1e-6);
  double S = sobolev_constant(4).S;
  double threshold() const { return S * S / 4; }
};

const N4Fixture& n4() {
  static const N4Fixture f;
  return f;
}

}  // namespace

TEST_CASE("mountain-pass constants") {
  const double S3 = sobolev_constant(3).S;
  const auto b = geometry_estimate({0.0, -1.0, 3}, 29.6, 1.0, S3);
  CHECK(b.regime == Regime::B0);
  CHECK(b.alpha == doctest::Approx(std::pow(S3, 1.5) / 3 - 0.5));
  CHECK(b.alpha == doctest::Approx(3.77).epsilon(0.01));
  CHECK(b.rho == doctest::Approx(std::pow(S3, 0.75)));

  // λ → λ₁⁻ drives α_B₀ to (μ/2)|Ω| < 0; C₀ needs λ < 0 as well, so neither applies.
  try {
    geometry_estimate({29.59, -1.0, 3}, 29.6, 1.0, S3);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::regime);
  }

  const auto c = geometry_estimate({-1.0, -1e-3, 3}, 29.6, 1.0, S3);
  CHECK(c.regime == Regime::C0);
  CHECK(c.alpha == doctest::Approx(std::pow(S3, 1.5) / 3).epsilon(1e-12));
  CHECK(c.rho == doctest::Approx(std::pow(S3, 0.75)));
}

TEST_CASE("negative endpoint along a ray") {
  const auto& f = n4();
  const Field w = find_negative_endpoint(f.grid, {0.0, 1.0, 4}, f.eig.phi1);
  CHECK(energy(f.grid, Params{0.0, 1.0, 4}, w).total < 0.0);
  const Grid g3 = cube(3, 12);
  const auto e3 = first_eigenpair(g3, 1e-6);
  const Field w3 = find_negative_endpoint(g3, {0.0, -1.0, 3}, e3.phi1);
  CHECK(energy(g3, Params{0.0, -1.0, 3}, w3).total < 0.0);
}

TEST_CASE("config validation") {
  MPConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.path_points = 8;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = MPConfig{};
  cfg.grad_tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = MPConfig{};
  cfg.descent_step = -1.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  CHECK(parse_status(to_string(MPStatus::collapsed_to_zero)) == MPStatus::collapsed_to_zero);
  CHECK(parse_initial_direction("bump") == InitialDirection::bump);
  CHECK_THROWS_AS(parse_initial_direction("sideways"), Error);
}

TEST_CASE("residual and positivity checks") {
  const auto& f = n4();
  CHECK(residual_check(f.grid, {1.0, 1.0, 4}, Field::Zero(f.grid.size())) == 0.0);
  CHECK(positivity_check(f.grid, f.eig.phi1));
  Field u = f.eig.phi1;
  u(17) = 0.0;
  CHECK_FALSE(positivity_check(f.grid, u));

  // Small multiple of φ₁ at λ = λ₁, μ = 0: only the critical term survives.
  const Grid g = cube(3, 12);
  const SpectralPair e = first_eigenpair(g, 1e-10);
  const double eps = 0.1;
  const double r = residual_check(g, {e.lambda1, 0.0, 3}, Field(eps * e.phi1));
  const double lead = std::pow(eps, 5) * l2_norm(g, Field(e.phi1.array().pow(5).matrix()));
  CHECK(r == doctest::Approx(lead).epsilon(1e-3));
}

TEST_CASE("mountain pass and ground state agree in the positive-mu regime") {
  const auto& f = n4();
  MPConfig cfg;
  for (const Params& p : {Params{0.0, 1.0, 4}, Params{-5.0, 1.0, 4}}) {
    INFO("lambda=" << p.lambda << " mu=" << p.mu);
    const MPResult mp = mountain_pass_solve(f.grid, p, cfg, &f.eig);
    REQUIRE(mp.status == MPStatus::converged);
    CHECK(mp.residual <= cfg.grad_tol);
    CHECK(residual_check(f.grid, p, mp.u) <= cfg.grad_tol);
    CHECK(positivity_check(f.grid, mp.u));
    CHECK(mp.level > 0.0);
    CHECK(mp.level < f.threshold() + cfg.energy_tol);
    CHECK(std::abs(nehari_g(f.grid, p, mp.u)) <= 10 * cfg.grad_tol * std::pow(l2_norm(f.grid, mp.u), 2));
    for (std::size_t i = 1; i < mp.level_history.size(); ++i) {
      REQUIRE(mp.level_history[i] <= mp.level_history[i - 1] + 1e-12 * std::abs(mp.level_history[i - 1]));
    }

    const MPResult gs = ground_state_search(f.grid, p, cfg, &f.eig);
    REQUIRE(gs.status == MPStatus::converged);
    CHECK(std::abs(gs.level - mp.level) <= 2 * cfg.energy_tol);
  }
  // Frozen levels at resolution 16.
  CHECK(mountain_pass_solve(f.grid, {0.0, 1.0, 4}, cfg, &f.eig).level == doctest::Approx(10.2294).epsilon(1e-4));
}

TEST_CASE("classical critical regime, mu = 0") {
  const auto& f = n4();
  MPConfig cfg;
  const Params p{f.eig.lambda1 / 2, 0.0, 4};
  const MPResult mp = mountain_pass_solve(f.grid, p, cfg, &f.eig);
  REQUIRE(mp.status == MPStatus::converged);
  CHECK(mp.level > 0.0);
  CHECK(mp.level < f.threshold());
  CHECK(positivity_check(f.grid, mp.u));
  CHECK(mp.level == doctest::Approx(13.5733).epsilon(1e-4));
}

TEST_CASE("ground state search removes the initial scaling") {
  const auto& f = n4();
  MPConfig cfg;
  const Params p{0.0, 1.0, 4};
  const Field u0 = initial_direction(f.grid, cfg, &f.eig);
  const MPResult a = ground_state_search(f.grid, p, cfg, &f.eig, u0);
  const MPResult b = ground_state_search(f.grid, p, cfg, &f.eig, Field(2.0 * u0));
  REQUIRE(a.status == MPStatus::converged);
  REQUIRE(b.status == MPStatus::converged);
  CHECK(std::abs(a.level - b.level) <= cfg.energy_tol);
}

TEST_CASE("ground state with lambda = mu = 0 satisfies the Nehari energy identity") {
  const Grid g = cube(3, 12);
  const SpectralPair e = first_eigenpair(g, 1e-6);
  MPConfig cfg;
  cfg.max_outer = 300;
  const Params p{0.0, 0.0, 3};
  const MPResult r = ground_state_search(g, p, cfg, &e);
  CHECK(r.level > 0.0);
  const auto fi = fiber_integrals(g, r.u);
  CHECK(r.level == doctest::Approx(fi.critical / 3.0).epsilon(1e-6));
}

TEST_CASE("nonexistence regime never converges to a positive solution") {
  const Grid g = cube(3, 12);
  const SpectralPair e = first_eigenpair(g, 1e-6);
  MPConfig cfg;
  cfg.max_outer = 200;
  const Params p{e.lambda1, -2.0, 3};
  for (std::uint64_t seed : {0u, 1u}) {
    cfg.seed = seed;
    const MPResult r = mountain_pass_solve(g, p, cfg, &e);
    CHECK(r.status != MPStatus::converged);
  }
}

TEST_CASE("fixed seed reproduces the run exactly") {
  const auto& f = n4();
  MPConfig cfg;
  cfg.seed = 42;
  cfg.max_outer = 30;
  const Params p{0.0, 1.0, 4};
  const MPResult a = mountain_pass_solve(f.grid, p, cfg, &f.eig);
  const MPResult b = mountain_pass_solve(f.grid, p, cfg, &f.eig);
  CHECK(a.iterations == b.iterations);
  CHECK(a.level == b.level);
  CHECK(a.level_history == b.level_history);
  CHECK((a.u - b.u).cwiseAbs().maxCoeff() == 0.0);
  cfg.seed = 43;
  CHECK(initial_direction(f.grid, cfg, &f.eig) != initial_direction(f.grid, MPConfig{}, &f.eig));
}

TEST_CASE("bump and file initial directions") {
  const auto& f = n4();
  MPConfig cfg;
  cfg.initial_direction = InitialDirection::bump;
  const Field bump = initial_direction(f.grid, cfg);
  CHECK(bump.minCoeff() >= 0.0);
  CHECK(bump.maxCoeff() > 0.0);

  MPResult r;
  r.u = bump;
  r.status = MPStatus::converged;
  const auto path = (std::filesystem::temp_directory_path() / "logbn_direction.txt").string();
  write_solution(path, f.grid, {0.0, 1.0, 4}, r);
  cfg.initial_direction = InitialDirection::file;
  cfg.direction_file = path;
  CHECK((initial_direction(f.grid, cfg) - bump).cwiseAbs().maxCoeff() == 0.0);
  std::filesystem::remove(path);
}
