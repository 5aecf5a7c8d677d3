#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "logbn/domain.hpp"
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

Field sine_product(const Grid& g) {
  return sample(g, [](const std::vector<double>& x) {
    double v = 1.0;
    for (double xi : x) v *= std::sin(pi * xi);
    return v;
  });
}

}  // namespace

TEST_CASE("unit cube lattice") {
  const Grid g = cube(3, 32);
  CHECK(g.size() == 31 * 31 * 31);
  CHECK(g.h == doctest::Approx(1.0 / 32).epsilon(1e-15));
  CHECK(g.full_box);
  // h^N times the interior count
  CHECK(g.volume == doctest::Approx(std::pow(31.0 / 32.0, 3)).epsilon(1e-14));
}

TEST_CASE("ball volume against pi^2 r^4 / 2") {
  DomainSpec s;
  s.kind = DomainKind::ball;
  s.dim = 4;
  s.extents = {1.0};
  s.resolution = 16;
  const Grid g = build_grid(s);
  const double exact = pi * pi / 2.0;
  CHECK(std::abs(g.volume - exact) / exact < 0.05);
  CHECK_FALSE(g.full_box);
}

TEST_CASE("coarse or malformed specs are rejected") {
  DomainSpec s;
  s.resolution = 1;
  try {
    build_grid(s);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::degenerate_domain);
  }
  s.resolution = 32;
  s.dim = 6;
  CHECK_THROWS_AS(build_grid(s), Error);
  s.dim = 3;
  s.extents = {1.0, -1.0, 1.0};
  CHECK_THROWS_AS(build_grid(s), Error);
  // A box thinner than one lattice cell has no interior.
  s.extents = {1.0, 1.0, 0.01};
  try {
    build_grid(s);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::degenerate_domain);
  }
}

TEST_CASE("stencil on simple fields") {
  const Grid g = cube(3, 16);
  CHECK(laplacian_apply(g, Field::Zero(g.size())).cwiseAbs().maxCoeff() == 0.0);

  // Each missing neighbour contributes 1/h² to a constant field.
  const Field lu = laplacian_apply(g, Field::Ones(g.size()));
  const double inv_h2 = 1.0 / (g.h * g.h);
  for (Index i = 0; i < g.size(); ++i) {
    int missing = 0;
    for (int k = 0; k < 2 * g.dim; ++k) missing += g.neighbors[static_cast<std::size_t>(i * 2 * g.dim + k)] < 0;
    REQUIRE(lu(i) == doctest::Approx(missing * inv_h2));
  }
  CHECK_THROWS_AS(laplacian_apply(g, Field::Zero(3)), Error);
  CHECK_THROWS_AS(integrate(g, Field::Zero(3)), Error);
}

TEST_CASE("sine product is an approximate eigenfunction with O(h^2) error") {
  double err[2];
  int k = 0;
  for (double res : {16.0, 32.0}) {
    const Grid g = cube(3, res);
    const Field u = sine_product(g);
    err[k++] = (laplacian_apply(g, u) - 3 * pi * pi * u).cwiseAbs().maxCoeff() / (3 * pi * pi);
  }
  // Per-axis symbol error is π²h²/12.
  CHECK(err[1] < 3e-3);
  CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("midpoint quadrature") {
  const Grid g = cube(3, 32);
  CHECK(integrate(g, Field::Zero(g.size())) == 0.0);
  CHECK(std::abs(integrate(g, Field::Ones(g.size())) - 1.0) <= 3 * g.h);
  const Field u = sine_product(g);
  CHECK(std::abs(integrate(g, u.cwiseAbs2()) - 0.125) / 0.125 < 0.02);
}

TEST_CASE("inradius") {
  DomainSpec s;
  CHECK(rho_max(s) == 0.5);
  s.extents = {1.0, 2.0, 3.0};
  CHECK(rho_max(s) == 0.5);
  s.kind = DomainKind::ball;
  s.extents = {2.0};
  CHECK(rho_max(s) == 2.0);
  s.resolution = 8;
  const Grid g = build_grid(s);
  CHECK(inradius(g) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("operator invariants: linearity, symmetry, positivity") {
  const Grid g = cube(4, 10);
  std::mt19937_64 rng(7);
  const Field u = random_smooth_field(g, rng, false);
  const Field v = random_smooth_field(g, rng, false);
  const Field lin = laplacian_apply(g, Field(2.5 * u - 0.75 * v)) - (2.5 * laplacian_apply(g, u) - 0.75 * laplacian_apply(g, v));
  CHECK(lin.cwiseAbs().maxCoeff() <= 1e-12 * laplacian_apply(g, u).cwiseAbs().maxCoeff());
  const double uv = integrate(g, u.cwiseProduct(laplacian_apply(g, v)));
  const double vu = integrate(g, v.cwiseProduct(laplacian_apply(g, u)));
  CHECK(uv == doctest::Approx(vu).epsilon(1e-12));
  CHECK(integrate(g, u.cwiseProduct(laplacian_apply(g, u))) > 0.0);
}

TEST_CASE("stiffness matrix matches the matrix-free stencil") {
  const Grid g = cube(3, 12);
  std::mt19937_64 rng(3);
  const Field u = random_smooth_field(g, rng, false);
  const Field a = stiffness_matrix(g) * u;
  CHECK((a - laplacian_apply(g, u)).cwiseAbs().maxCoeff() <= 1e-10 * a.cwiseAbs().maxCoeff());
}

TEST_CASE("mask file round trip") {
  DomainSpec s;
  s.kind = DomainKind::ball;
  s.dim = 3;
  s.extents = {0.5};
  s.resolution = 16;
  const Grid g = build_grid(s);
  const auto path = (std::filesystem::temp_directory_path() / "logbn_mask_roundtrip.txt").string();
  write_mask_file(path, g);
  const Grid r = read_mask_file(path);
  CHECK(r.dim == g.dim);
  CHECK(r.h == g.h);
  CHECK(r.dims == g.dims);
  CHECK(r.mask == g.mask);
  CHECK(r.size() == g.size());
  CHECK(r.volume == doctest::Approx(g.volume));
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_mask_file(path), Error);
}

TEST_CASE("lexicographic order, last axis fastest") {
  const Grid g = cube(3, 8);
  const auto p0 = g.point(0);
  const auto p1 = g.point(1);
  CHECK(p0[0] == p1[0]);
  CHECK(p0[1] == p1[1]);
  CHECK(p1[2] - p0[2] == doctest::Approx(g.h));
}
