#pragma once

#include <cmath>
#include <string>

#include "logbn/domain.hpp"

namespace logbn {

/// Problem instance -Δu = |u|^{2*-2}u + λu + μ u log u² in N dimensions.
struct Params {
  double lambda = 0.0;
  double mu = 0.0;
  int dim = 3;

  double two_star() const { return 2.0 * dim / (dim - 2.0); }
  void validate() const;
};

template <typename Scalar>
struct EnergyBreakdownT {
  Scalar dirichlet{0};    // ½∫|∇u|²
  Scalar critical{0};     // (1/2*)∫u₊^{2*}
  Scalar quadratic{0};    // (λ/2)∫u₊²
  Scalar logarithmic{0};  // (μ/2)∫u₊²(log u₊² − 1)
  Scalar total{0};
};
using EnergyBreakdown = EnergyBreakdownT<double>;

/// The four integrals that determine I(tu) for every t > 0:
/// I(tu) = t²/2·a − t^{2*}/2*·b − λ/2·t²c − μ/2·t²(d + c log t² − c).
template <typename Scalar>
struct FiberIntegralsT {
  Scalar gradient{0};  // a = ∫|∇u|²
  Scalar critical{0};  // b = ∫u₊^{2*}
  Scalar mass{0};      // c = ∫u₊²
  Scalar log_mass{0};  // d = ∫u₊² log u₊²
};
using FiberIntegrals = FiberIntegralsT<double>;

namespace detail {

// s^p for s ≥ 0 with exact integer paths for N = 3, 4.
template <typename Scalar>
inline Scalar pos_pow(Scalar s, int dim, bool minus_one) {
  using std::pow;
  switch (dim) {
    case 3: {  // 2* = 6
      const Scalar s2 = s * s;
      const Scalar s4 = s2 * s2;
      return minus_one ? s4 * s : s4 * s2;
    }
    case 4: {  // 2* = 4
      const Scalar s2 = s * s;
      return minus_one ? s2 * s : s2 * s2;
    }
    default: {
      const Scalar p = Scalar(2.0 * dim / (dim - 2.0)) - (minus_one ? Scalar(1) : Scalar(0));
      return pow(s, p);
    }
  }
}

// s² log s² with the continuous extension 0·log 0 = 0.
template <typename Scalar>
inline Scalar xlogx2(Scalar s) {
  using std::log;
  return s > Scalar(0) ? s * s * log(s * s) : Scalar(0);
}

template <typename Derived>
void check_finite(const Eigen::MatrixBase<Derived>& u) {
  if (!u.allFinite()) throw Error(ErrorKind::invalid_field, "field contains non-finite values");
}

}  // namespace detail

template <typename Derived>
FiberIntegralsT<typename Derived::Scalar> fiber_integrals(const Grid& grid,
                                                          const Eigen::MatrixBase<Derived>& u) {
  using Scalar = typename Derived::Scalar;
  detail::check_shape(grid, u.size());
  detail::check_finite(u);
  const FieldT<Scalar> lu = laplacian_apply(grid, u);
  FiberIntegralsT<Scalar> f;
  f.gradient = integrate(grid, u.cwiseProduct(lu));
  Scalar b{0}, c{0}, d{0};
  for (Index i = 0; i < u.size(); ++i) {
    const Scalar up = u(i) > Scalar(0) ? Scalar(u(i)) : Scalar(0);
    if (up == Scalar(0)) continue;
    b += detail::pos_pow(up, grid.dim, false);
    c += up * up;
    d += detail::xlogx2(up);
  }
  const Scalar w = Scalar(grid.cell_volume());
  f.critical = b * w;
  f.mass = c * w;
  f.log_mass = d * w;
  return f;
}

template <typename Scalar>
EnergyBreakdownT<Scalar> energy_from(const FiberIntegralsT<Scalar>& f, const Params& p) {
  EnergyBreakdownT<Scalar> e;
  e.dirichlet = Scalar(0.5) * f.gradient;
  e.critical = f.critical / Scalar(p.two_star());
  e.quadratic = Scalar(0.5 * p.lambda) * f.mass;
  e.logarithmic = Scalar(0.5 * p.mu) * (f.log_mass - f.mass);
  e.total = e.dirichlet - e.critical - e.quadratic - e.logarithmic;
  return e;
}

/// I(u) = ½∫|∇u|² − (1/2*)∫u₊^{2*} − (λ/2)∫u₊² − (μ/2)∫u₊²(log u₊² − 1),
/// with the Dirichlet term evaluated as ½·integrate(u·(−Δ_h u)).
template <typename Derived>
EnergyBreakdownT<typename Derived::Scalar> energy(const Grid& grid, const Params& p,
                                                  const Eigen::MatrixBase<Derived>& u) {
  return energy_from(fiber_integrals(grid, u), p);
}

/// L²-pairing representative of I'(u):
/// G(u) = −Δ_h u − u₊^{2*−1} − λu₊ − μu₊ log u₊².
template <typename Derived>
FieldT<typename Derived::Scalar> gradient(const Grid& grid, const Params& p,
                                          const Eigen::MatrixBase<Derived>& u) {
  using Scalar = typename Derived::Scalar;
  using std::log;
  detail::check_finite(u);
  FieldT<Scalar> g = laplacian_apply(grid, u);
  const Scalar lambda(p.lambda), mu(p.mu);
  for (Index i = 0; i < u.size(); ++i) {
    const Scalar up = u(i) > Scalar(0) ? Scalar(u(i)) : Scalar(0);
    if (up == Scalar(0)) continue;
    g(i) -= detail::pos_pow(up, grid.dim, true) + lambda * up + mu * up * log(up * up);
  }
  return g;
}

/// Nehari functional g(u) = ⟨I'(u), u⟩.
template <typename Scalar>
Scalar nehari_from(const FiberIntegralsT<Scalar>& f, const Params& p) {
  return f.gradient - f.critical - Scalar(p.lambda) * f.mass - Scalar(p.mu) * f.log_mass;
}

template <typename Derived>
typename Derived::Scalar nehari_g(const Grid& grid, const Params& p,
                                  const Eigen::MatrixBase<Derived>& u) {
  return nehari_from(fiber_integrals(grid, u), p);
}

/// I(tu) for t > 0 from the fiber integrals of u.
double fiber_energy(const FiberIntegrals& f, const Params& p, double t);

/// g(tu)/t² = a − t^{2*−2}b − λc − μd − μc log t².
double fiber_slope(const FiberIntegrals& f, const Params& p, double t);

struct NehariProjection {
  double t = 1.0;
  /// More than one positive root of t ↦ g(tu) was found (possible for μ < 0);
  /// t is the largest one.
  bool multiple_roots = false;
  int root_count = 1;
};

/// Solves g(t·u) = 0 for t in [1e-8, 1e8], returning the largest root.
/// Throws Error(bracket) when u₊ ≡ 0 or no sign change exists.
NehariProjection nehari_project(const FiberIntegrals& f, const Params& p);

template <typename Derived>
NehariProjection nehari_project(const Grid& grid, const Params& p,
                                const Eigen::MatrixBase<Derived>& u) {
  const auto f = fiber_integrals(grid, u);
  return nehari_project(FiberIntegrals{double(f.gradient), double(f.critical), double(f.mass),
                                       double(f.log_mass)},
                        p);
}

}  // namespace logbn
