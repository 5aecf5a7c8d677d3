#pragma once

#include "logbn/domain.hpp"

namespace logbn {

/// First Dirichlet eigenpair of -Δ_h; phi1 > 0 with unit L² norm.
struct SpectralPair {
  double lambda1 = 0.0;
  Field phi1;
  double residual = 0.0;
  int iterations = 0;
};

/// Inverse power iteration with CG inner solves (inner tolerance 1e-2·tol).
/// residual = ‖Lφ − λφ‖₂/λ. Throws ConvergenceError at the iteration cap.
SpectralPair first_eigenpair(const Grid& grid, double tol = 1e-6, int max_iter = 500);

struct SobolevConstant {
  int dim = 0;
  double S = 0.0;
};

/// ∫|∇u_ε|² / (∫u_ε^{2*})^{2/2*} over ℝᴺ by radial quadrature, truncated
/// where the integrands drop below 1e-14 of their peak.
double sobolev_quotient(int dim, double eps);

/// S from the instanton quotient; checks ε ∈ {0.1, 1, 10} agree to 1e-6.
SobolevConstant sobolev_constant(int dim);

struct LogSobolevReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/// lhs = ∫u² log u², rhs = (a/π)‖∇u‖² + (log|u|₂² − N(1 + log a))|u|₂².
LogSobolevReport log_sobolev_check(const Grid& grid, const Field& u, double a, double tol = 1e-10);

/// Surface area of the unit sphere in ℝᴺ.
double sphere_area(int dim);

}  // namespace logbn
