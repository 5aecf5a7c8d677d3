#include "logbn/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "logbn/constants.hpp"
#include "logbn/functional.hpp"
#include "logbn/regions.hpp"

namespace logbn {

int VerifyReport::passed() const {
  return static_cast<int>(std::count_if(checks.begin(), checks.end(), [](const VerifyCheck& c) { return c.pass; }));
}

int VerifyReport::failed() const { return static_cast<int>(checks.size()) - passed(); }

Field random_smooth_field(const Grid& grid, std::mt19937_64& rng, bool positive) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_int_distribution<int> freq(1, 3);
  struct Mode {
    std::vector<int> k;
    double amp;
  };
  std::vector<Mode> modes(5);
  for (auto& m : modes) {
    for (int a = 0; a < grid.dim; ++a) m.k.push_back(freq(rng));
    m.amp = unit(rng);
  }
  const double offset = 1.0 + 0.5 * unit(rng);
  std::vector<double> len;
  for (int a = 0; a < grid.dim; ++a) len.push_back((grid.dims[static_cast<std::size_t>(a)] - 1) * grid.h);
  return sample(grid, [&](const std::vector<double>& x) {
    // The fundamental mode keeps the field vanishing on the box boundary.
    double base = 1.0;
    for (int a = 0; a < grid.dim; ++a) {
      base *= std::sin(std::numbers::pi * (x[static_cast<std::size_t>(a)] - grid.origin[static_cast<std::size_t>(a)]) /
                       len[static_cast<std::size_t>(a)]);
    }
    double m = 0.0;
    for (const auto& md : modes) {
      double prod = md.amp;
      for (int a = 0; a < grid.dim; ++a) {
        prod *= std::sin(std::numbers::pi * md.k[static_cast<std::size_t>(a)] *
                         (x[static_cast<std::size_t>(a)] - grid.origin[static_cast<std::size_t>(a)]) /
                         len[static_cast<std::size_t>(a)]);
      }
      m += prod;
    }
    return positive ? 2.0 * base * (offset + 0.1 * m) : 2.0 * (offset * base + 0.5 * m);
  });
}

namespace {

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

}  // namespace

VerifyReport run_verify(const DomainSpec& spec, std::uint64_t seed) {
  spec.validate();
  const Grid grid = build_grid(spec);
  std::mt19937_64 rng(seed);
  VerifyReport rep;
  auto add = [&](std::string suite, std::string name, bool pass, std::string detail) {
    rep.checks.push_back({std::move(suite), std::move(name), pass, std::move(detail)});
  };

  // Discrete self-adjointness and positivity of -Δ_h.
  {
    const Field u = random_smooth_field(grid, rng, false);
    const Field v = random_smooth_field(grid, rng, false);
    const double uv = integrate(grid, u.cwiseProduct(laplacian_apply(grid, v)));
    const double vu = integrate(grid, v.cwiseProduct(laplacian_apply(grid, u)));
    add("laplacian", "symmetry", std::abs(uv - vu) <= 1e-10 * std::max(1.0, std::abs(uv)),
        fmt("<u,Lv> = %.12g, <v,Lu> = %.12g", uv, vu));
    const double uu = integrate(grid, u.cwiseProduct(laplacian_apply(grid, u)));
    add("laplacian", "positivity", uu > 0.0, fmt("<u,Lu> = %.12g", uu));
  }

  // Central differences of I against <G(u), v>.
  for (const auto& [lambda, mu] : {std::pair{0.0, 1.0}, std::pair{5.0, -1.0}, std::pair{-3.0, 2.0}}) {
    const Params p{lambda, mu, spec.dim};
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      const Field u = random_smooth_field(grid, rng, false);
      const Field v = random_smooth_field(grid, rng, false);
      constexpr double delta = 1e-5;
      const double fd = (energy(grid, p, Field(u + delta * v)).total - energy(grid, p, Field(u - delta * v)).total) /
                        (2.0 * delta);
      const double an = integrate(grid, gradient(grid, p, u).cwiseProduct(v));
      worst = std::max(worst, std::abs(fd - an) / std::max({std::abs(fd), std::abs(an), 1e-12}));
    }
    add("gradient", fmt("finite_difference(lambda=%g,mu=%g)", lambda, mu), worst <= 1e-4,
        fmt("worst relative error %.3e", worst));
  }

  // g(u) = <G(u), u>.
  {
    const Params p{1.0, 0.5, spec.dim};
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      const Field u = random_smooth_field(grid, rng, false);
      const double g = nehari_g(grid, p, u);
      const double pairing = integrate(grid, gradient(grid, p, u).cwiseProduct(u));
      worst = std::max(worst, std::abs(g - pairing) / std::max(1.0, std::abs(g)));
    }
    add("functional", "nehari_identity", worst <= 1e-8, fmt("worst relative gap %.3e", worst));
  }

  // Eigenvalue against Σ π²/L_i² on boxes.
  SpectralPair eig = first_eigenpair(grid, 1e-6);
  if (spec.kind == DomainKind::box) {
    double exact = 0.0;
    for (int a = 0; a < spec.dim; ++a) exact += std::numbers::pi * std::numbers::pi / std::pow(spec.extent(a), 2);
    const double rel = std::abs(eig.lambda1 - exact) / exact;
    add("constants", "eigenvalue_oracle", rel <= 0.02, fmt("lambda1 = %.8g, closed form %.8g", eig.lambda1, exact));
  }
  add("constants", "eigenfunction_positive", eig.phi1.minCoeff() > 0.0, fmt("min phi1 = %.3e", eig.phi1.minCoeff()));

  // Sobolev quotient is invariant under ε-rescaling.
  {
    const double a = sobolev_quotient(spec.dim, 0.1);
    const double b = sobolev_quotient(spec.dim, 1.0);
    const double c = sobolev_quotient(spec.dim, 10.0);
    const double spread = (std::max({a, b, c}) - std::min({a, b, c})) / b;
    add("constants", "sobolev_scale_invariance", spread <= 1e-6, fmt("relative spread %.3e", spread));
  }

  // Log-Sobolev inequality on φ₁ and on a random positive field.
  {
    const Field bump = random_smooth_field(grid, rng, true);
    for (double a : {0.5, 1.0, 2.0}) {
      const auto r1 = log_sobolev_check(grid, eig.phi1, a);
      const auto r2 = log_sobolev_check(grid, bump, a);
      add("constants", fmt("log_sobolev(a=%g)", a), r1.holds && r2.holds,
          fmt("phi1 slack %.4g, random field slack %.4g", r1.rhs - r1.lhs, r2.rhs - r2.lhs));
    }
  }

  // Curve samples satisfy their defining equations.
  {
    const DomainConstants k{eig.lambda1, grid.volume, sobolev_constant(spec.dim).S, rho_max(spec), spec.dim};
    for (Curve c : {Curve::tau1, Curve::eta1, Curve::eta2, Curve::eta3}) {
      const auto cs = curve_samples(c, -8.0, -0.05, k, 50);
      double worst = 0.0;
      for (const auto& s : cs.samples) worst = std::max(worst, curve_residual(s, k));
      add("regions", std::string("plug_back_") + to_string(c), !cs.samples.empty() && worst <= 1e-10,
          fmt("worst residual %.3e over %g samples", worst, double(cs.samples.size())));
    }
  }
  return rep;
}

}  // namespace logbn
