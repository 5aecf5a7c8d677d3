#include "logbn/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "logbn/io.hpp"
#include "logbn/poisson.hpp"

namespace logbn {

const char* to_string(InitialDirection d) {
  switch (d) {
    case InitialDirection::eigenfunction: return "eigenfunction";
    case InitialDirection::bump: return "bump";
    case InitialDirection::file: return "file";
  }
  return "?";
}

InitialDirection parse_initial_direction(const std::string& text) {
  if (text == "eigenfunction") return InitialDirection::eigenfunction;
  if (text == "bump") return InitialDirection::bump;
  if (text == "file") return InitialDirection::file;
  throw Error(ErrorKind::usage, "initial_direction: expected eigenfunction, bump or file, got '" + text + "'");
}

const char* to_string(MPStatus s) {
  switch (s) {
    case MPStatus::converged: return "converged";
    case MPStatus::collapsed_to_zero: return "collapsed_to_zero";
    case MPStatus::max_iter: return "max_iter";
  }
  return "?";
}

MPStatus parse_status(const std::string& text) {
  if (text == "converged") return MPStatus::converged;
  if (text == "collapsed_to_zero") return MPStatus::collapsed_to_zero;
  if (text == "max_iter") return MPStatus::max_iter;
  throw Error(ErrorKind::io, "unknown solver status '" + text + "'");
}

const char* to_string(Regime r) { return r == Regime::B0 ? "B0" : "C0"; }

void MPConfig::validate() const {
  if (path_points < 16) throw Error(ErrorKind::usage, "path_points: must be at least 16");
  if (!(descent_step > 0.0)) throw Error(ErrorKind::usage, "descent_step: must be positive");
  if (max_outer < 1) throw Error(ErrorKind::usage, "max_outer: must be at least 1");
  if (!(grad_tol > 0.0)) throw Error(ErrorKind::usage, "grad_tol: must be positive");
  if (!(energy_tol > 0.0)) throw Error(ErrorKind::usage, "energy_tol: must be positive");
  if (initial_direction == InitialDirection::file && direction_file.empty()) {
    throw Error(ErrorKind::usage, "direction_file: required when initial_direction=file");
  }
}

GeometryEstimate geometry_estimate(const Params& p, double lambda1, double volume, double S) {
  p.validate();
  const int n = p.dim;
  if (p.mu < 0.0) {
    if (p.lambda >= 0.0 && p.lambda < lambda1) {
      const double q = (lambda1 - p.lambda) / lambda1;
      const double alpha = std::pow(q, n / 2.0) * std::pow(S, n / 2.0) / n + 0.5 * p.mu * volume;
      if (alpha > 0.0) return {alpha, std::pow(q, (n - 2.0) / 4.0) * std::pow(S, n / 4.0), Regime::B0};
    }
    const double alpha = std::pow(S, n / 2.0) / n + 0.5 * p.mu * std::exp(-p.lambda / p.mu) * volume;
    if (alpha > 0.0) return {alpha, std::pow(S, n / 4.0), Regime::C0};
  }
  throw Error(ErrorKind::regime, "geometry_estimate: (lambda, mu) lies outside B0 and C0");
}

Field find_negative_endpoint(const Grid& grid, const Params& p, const Field& direction) {
  detail::check_shape(grid, direction.size());
  if (direction.minCoeff() < 0.0 || !(direction.maxCoeff() > 0.0)) {
    throw Error(ErrorKind::usage, "direction: must be nonnegative and not identically zero");
  }
  const FiberIntegrals f = fiber_integrals(grid, direction);
  const double ts = p.two_star();
  auto slope_derivative = [&](double t) {
    return -(ts - 2.0) * std::pow(t, ts - 3.0) * f.critical - 2.0 * p.mu * f.mass / t;
  };
  for (double t = 1.0; t <= 1e12; t *= 2.0) {
    if (fiber_energy(f, p, t) < 0.0 && fiber_slope(f, p, t) < 0.0 && slope_derivative(t) < 0.0) {
      return t * direction;
    }
  }
  throw Error(ErrorKind::scaling, "find_negative_endpoint: I(t u) still nonnegative at t = 1e12");
}

Field initial_direction(const Grid& grid, const MPConfig& cfg, const SpectralPair* eig) {
  Field base;
  switch (cfg.initial_direction) {
    case InitialDirection::file: {
      const SolutionFile s = read_solution(cfg.direction_file);
      detail::check_shape(grid, s.u.size());
      return s.u.cwiseMax(0.0);
    }
    case InitialDirection::eigenfunction: {
      SpectralPair local;
      if (!eig) {
        local = first_eigenpair(grid, 1e-6);
        eig = &local;
      }
      base = eig->phi1 / eig->phi1.maxCoeff();
      break;
    }
    case InitialDirection::bump: {
      std::vector<double> c;
      for (int a = 0; a < grid.dim; ++a) {
        c.push_back(grid.origin[static_cast<std::size_t>(a)] + 0.5 * (grid.dims[static_cast<std::size_t>(a)] - 1) * grid.h);
      }
      const double r0 = inradius(grid);
      base = sample(grid, [&](const std::vector<double>& x) {
        double d2 = 0.0;
        for (int a = 0; a < grid.dim; ++a) d2 += std::pow(x[static_cast<std::size_t>(a)] - c[static_cast<std::size_t>(a)], 2);
        const double s = 1.0 - d2 / (r0 * r0);
        return s > 0.0 ? s * s : 0.0;
      });
      if (!(base.maxCoeff() > 0.0)) throw Error(ErrorKind::degenerate_domain, "bump direction vanishes on this grid");
      break;
    }
  }

  // Smooth positive modulation 1 + m(x)/16 with |m| ≤ 4, drawn from the seed.
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_int_distribution<int> freq(0, 2);
  struct Mode {
    std::vector<int> k;
    double phase, amp;
  };
  std::vector<Mode> modes(4);
  for (auto& m : modes) {
    for (int a = 0; a < grid.dim; ++a) m.k.push_back(freq(rng));
    m.phase = std::numbers::pi * unit(rng);
    m.amp = unit(rng);
  }
  Field mod(grid.size());
  for (Index i = 0; i < grid.size(); ++i) {
    const auto x = grid.point(i);
    double m = 0.0;
    for (const auto& md : modes) {
      double arg = md.phase;
      for (int a = 0; a < grid.dim; ++a) {
        const double len = (grid.dims[static_cast<std::size_t>(a)] - 1) * grid.h;
        arg += 2.0 * std::numbers::pi * md.k[static_cast<std::size_t>(a)] *
               (x[static_cast<std::size_t>(a)] - grid.origin[static_cast<std::size_t>(a)]) / len;
      }
      m += md.amp * std::cos(arg);
    }
    mod(i) = 1.0 + 0.0625 * m;
  }
  return base.cwiseProduct(mod);
}

double residual_check(const Grid& grid, const Params& p, const Field& u) {
  return l2_norm(grid, gradient(grid, p, u)) / std::max(1.0, l2_norm(grid, u));
}

bool positivity_check(const Grid& grid, const Field& u) {
  detail::check_shape(grid, u.size());
  return u.size() > 0 && u.minCoeff() > 0.0;
}

namespace {

constexpr double armijo_c = 1e-4;
constexpr int max_halvings = 40;

// Ray maximum of v: t·v with t the largest Nehari root. Empty when the ray
// has no interior maximum.
struct RayPoint {
  Field v;
  double level = 0.0;
  bool multiple_roots = false;
};

std::optional<RayPoint> ray_max(const Grid& grid, const Params& p, const Field& v) {
  if (!(v.maxCoeff() > 0.0)) return std::nullopt;
  const FiberIntegrals f = fiber_integrals(grid, v);
  NehariProjection proj;
  try {
    proj = nehari_project(f, p);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::bracket) return std::nullopt;
    throw;
  }
  const double level = fiber_energy(f, p, proj.t);
  return RayPoint{proj.t * v, level, proj.multiple_roots};
}

// One Armijo-backtracked H¹ step of J(v) = max_t I(tv) from a ray maximum
// v with J(v) = level. The step length is updated in place.
std::optional<RayPoint> ray_step(const Grid& grid, const Params& p, const Field& v, double level, const Field& g,
                                 const Field& d, double& step) {
  const double slope = integrate(grid, g.cwiseProduct(d));
  // Roundoff floor of an energy summed over ~10⁶ grid points.
  const double noise = 1e-12 * std::max(1.0, std::abs(level));
  for (int k = 0; k < max_halvings; ++k, step *= 0.5) {
    auto trial = ray_max(grid, p, v - step * d);
    if (trial && trial->level <= level - armijo_c * step * slope + noise) return trial;
  }
  return std::nullopt;
}

struct Converged {
  Field u;
  double residual;
};

// Certifies the nonnegative part of v as a critical point.
std::optional<Converged> certify(const Grid& grid, const Params& p, const Field& v, double grad_tol) {
  Field u = v.cwiseMax(0.0);
  if (!(u.maxCoeff() > 0.0)) return std::nullopt;
  const double r = residual_check(grid, p, u);
  if (r <= grad_tol) return Converged{std::move(u), r};
  return std::nullopt;
}

}  // namespace

MPResult mountain_pass_solve(const Grid& grid, const Params& p, const MPConfig& cfg, const SpectralPair* eig) {
  p.validate();
  cfg.validate();
  const Field dir = initial_direction(grid, cfg, eig);
  const Field w = find_negative_endpoint(grid, p, dir);
  const double initial_scale = l2_norm(grid, w);
  const PoissonSolver poisson(grid);

  const int count = cfg.path_points;
  std::vector<Field> nodes(static_cast<std::size_t>(count));
  std::vector<double> energies(static_cast<std::size_t>(count), 0.0);
  for (int j = 0; j < count; ++j) {
    nodes[static_cast<std::size_t>(j)] = (double(j) / (count - 1)) * w;
    if (j > 0) energies[static_cast<std::size_t>(j)] = energy(grid, p, nodes[static_cast<std::size_t>(j)]).total;
  }

  MPResult res;
  int tracked = -1;
  double level = std::numeric_limits<double>::infinity();
  double step = cfg.descent_step;
  const double width = std::max(1.0, count / 16.0);

  auto finish = [&](MPStatus status, Field u, int iterations) {
    res.status = status;
    res.iterations = iterations;
    res.u = std::move(u);
    res.residual = residual_check(grid, p, res.u);
    if (status != MPStatus::converged) res.level = std::isfinite(level) ? level : 0.0;
    return res;
  };

  for (int it = 1; it <= cfg.max_outer; ++it) {
    // Node 0 carries I(0) = 0; the endpoint stays below zero.
    const auto top = std::max_element(energies.begin(), energies.end() - 1);
    int k = static_cast<int>(top - energies.begin());
    if (k == 0) return finish(MPStatus::collapsed_to_zero, Field::Zero(grid.size()), it);

    if (k != tracked) {
      auto refined = ray_max(grid, p, nodes[static_cast<std::size_t>(k)]);
      if (!refined) return finish(MPStatus::collapsed_to_zero, Field::Zero(grid.size()), it);
      if (tracked >= 0 && refined->level > level) {
        // Moving to this node would raise the level; keep descending the old one.
        k = tracked;
      } else {
        nodes[static_cast<std::size_t>(k)] = std::move(refined->v);
        energies[static_cast<std::size_t>(k)] = refined->level;
        res.multiple_roots = res.multiple_roots || refined->multiple_roots;
        tracked = k;
      }
    }
    Field& top_node = nodes[static_cast<std::size_t>(k)];
    level = energies[static_cast<std::size_t>(k)];
    res.level_history.push_back(level);
    res.level = level;

    if (l2_norm(grid, top_node) < 1e-6 * initial_scale) {
      return finish(MPStatus::collapsed_to_zero, Field::Zero(grid.size()), it);
    }
    if (auto c = certify(grid, p, top_node, cfg.grad_tol)) {
      res.level = energy(grid, p, c->u).total;
      return finish(MPStatus::converged, std::move(c->u), it);
    }

    const Field g = gradient(grid, p, top_node);
    const Field d = poisson.solve(g);
    step = std::min(cfg.descent_step, 2.0 * step);
    auto next = ray_step(grid, p, top_node, level, g, d, step);
    if (!next) return finish(MPStatus::max_iter, top_node.cwiseMax(0.0), it);
    top_node = std::move(next->v);
    energies[static_cast<std::size_t>(k)] = next->level;
    res.multiple_roots = res.multiple_roots || next->multiple_roots;

    // Damped descent of the neighbouring nodes keeps the path in one piece.
    for (int j = 1; j + 1 < count; ++j) {
      if (j == k) continue;
      const double weight = std::exp(-0.5 * (j - k) * (j - k) / (width * width));
      // Nodes already below I = 0 cannot carry the path maximum.
      if (weight < 0.05 || energies[static_cast<std::size_t>(j)] <= 0.0) continue;
      Field& v = nodes[static_cast<std::size_t>(j)];
      const Field gj = gradient(grid, p, v);
      const Field dj = poisson.solve(gj);
      const double slope = integrate(grid, gj.cwiseProduct(dj));
      double s = weight * step;
      for (int h = 0; h < 20; ++h, s *= 0.5) {
        Field trial = v - s * dj;
        const double e = energy(grid, p, trial).total;
        if (e <= energies[static_cast<std::size_t>(j)] - armijo_c * s * slope) {
          v = std::move(trial);
          energies[static_cast<std::size_t>(j)] = e;
          break;
        }
      }
    }
  }
  const Field& last = nodes[static_cast<std::size_t>(std::max(tracked, 1))];
  return finish(MPStatus::max_iter, last.cwiseMax(0.0), cfg.max_outer);
}

MPResult ground_state_search(const Grid& grid, const Params& p, const MPConfig& cfg, const SpectralPair* eig,
                             const std::optional<Field>& start) {
  p.validate();
  cfg.validate();
  Field u0 = start ? *start : initial_direction(grid, cfg, eig);
  detail::check_shape(grid, u0.size());
  const FiberIntegrals f0 = fiber_integrals(grid, u0);
  const NehariProjection proj0 = nehari_project(f0, p);

  MPResult res;
  res.multiple_roots = proj0.multiple_roots;
  Field u = proj0.t * u0;
  double level = fiber_energy(f0, p, proj0.t);
  const PoissonSolver poisson(grid);
  double step = cfg.descent_step;

  for (int it = 1; it <= cfg.max_outer; ++it) {
    res.level_history.push_back(level);
    if (auto c = certify(grid, p, u, cfg.grad_tol)) {
      res.u = std::move(c->u);
      res.residual = c->residual;
      res.level = energy(grid, p, res.u).total;
      res.iterations = it;
      res.status = MPStatus::converged;
      return res;
    }
    const Field g = gradient(grid, p, u);
    const Field d = poisson.solve(g);
    step = std::min(cfg.descent_step, 2.0 * step);
    auto next = ray_step(grid, p, u, level, g, d, step);
    if (!next) {
      res.iterations = it;
      break;
    }
    u = std::move(next->v);
    level = next->level;
    res.multiple_roots = res.multiple_roots || next->multiple_roots;
    res.iterations = it;
  }
  res.u = u.cwiseMax(0.0);
  res.residual = residual_check(grid, p, res.u);
  res.level = level;
  res.status = MPStatus::max_iter;
  return res;
}

}  // namespace logbn
