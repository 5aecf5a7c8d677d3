#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "logbn/constants.hpp"
#include "logbn/domain.hpp"
#include "logbn/functional.hpp"

namespace logbn {

enum class InitialDirection { eigenfunction, bump, file };

const char* to_string(InitialDirection d);
InitialDirection parse_initial_direction(const std::string& text);

struct MPConfig {
  int path_points = 16;
  /// Initial H¹ step length; Armijo halves it as needed.
  double descent_step = 1.0;
  int max_outer = 2000;
  /// Bound on ‖G(u)‖₂ / max(1, ‖u‖₂) at convergence.
  double grad_tol = 1e-5;
  /// Tolerance when comparing levels of different solves.
  double energy_tol = 1e-6;
  std::uint64_t seed = 0;
  InitialDirection initial_direction = InitialDirection::eigenfunction;
  std::string direction_file;

  void validate() const;
};

enum class MPStatus { converged, collapsed_to_zero, max_iter };

const char* to_string(MPStatus s);
MPStatus parse_status(const std::string& text);

struct MPResult {
  Field u;
  double level = 0.0;
  double residual = 0.0;
  int iterations = 0;
  MPStatus status = MPStatus::max_iter;
  /// Level after each outer iteration.
  std::vector<double> level_history;
  /// Set when some Nehari projection saw more than one root.
  bool multiple_roots = false;
};

enum class Regime { B0, C0 };

const char* to_string(Regime r);

struct GeometryEstimate {
  double alpha = 0.0;
  double rho = 0.0;
  Regime regime = Regime::B0;
};

/// Closed-form mountain-pass constants for μ < 0. B₀ is preferred when both
/// regimes apply. Throws Error(regime) outside B₀ ∪ C₀.
GeometryEstimate geometry_estimate(const Params& p, double lambda1, double volume, double S);

/// w = t·direction with I(w) < 0 beyond the fiber maximum, t found by doubling.
Field find_negative_endpoint(const Grid& grid, const Params& p, const Field& direction);

/// Positive starting direction for the solvers (φ₁ or a bump, times a
/// seed-driven smooth modulation; or a field read from file).
Field initial_direction(const Grid& grid, const MPConfig& cfg, const SpectralPair* eig = nullptr);

/// Path deformation between 0 and find_negative_endpoint(direction).
MPResult mountain_pass_solve(const Grid& grid, const Params& p, const MPConfig& cfg,
                             const SpectralPair* eig = nullptr);

/// Descent on J(v) = max_t I(tv), rescaling onto the Nehari manifold after
/// every step. Throws Error(bracket) when the start cannot be projected.
MPResult ground_state_search(const Grid& grid, const Params& p, const MPConfig& cfg,
                             const SpectralPair* eig = nullptr,
                             const std::optional<Field>& start = std::nullopt);

/// ‖G(u)‖₂ / max(1, ‖u‖₂)
double residual_check(const Grid& grid, const Params& p, const Field& u);

bool positivity_check(const Grid& grid, const Field& u);

}  // namespace logbn
