#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "logbn/errors.hpp"

namespace logbn {

template <typename Scalar>
using FieldT = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using Field = FieldT<double>;

using Index = Eigen::Index;

enum class DomainKind { box, ball, mask_file };

const char* to_string(DomainKind kind);
DomainKind parse_domain_kind(const std::string& text);

struct DomainSpec {
  DomainKind kind = DomainKind::box;
  int dim = 3;
  /// Box: per-axis lengths (one value broadcasts to every axis). Ball: {radius}.
  std::vector<double> extents{1.0};
  /// Lattice points per unit length; ignored for mask files (the file fixes h).
  double resolution = 32.0;
  std::string mask_path;

  /// Throws Error(usage) when N is outside {3,4,5}, an extent is not
  /// positive, or the resolution is below 8.
  void validate() const;
  double extent(int axis) const;
};

/// Uniform lattice covering the domain's bounding box. Lattice nodes on the
/// outer layer or outside the domain carry the Dirichlet value 0; interior
/// points are the unknowns, ordered lexicographically (last axis fastest).
struct Grid {
  int dim = 0;
  double h = 0.0;
  std::vector<int> dims;        // lattice nodes per axis
  std::vector<double> origin;   // coordinate of lattice node 0 per axis
  std::vector<std::uint8_t> mask;
  std::vector<Index> interior;  // lattice index of each interior point
  std::vector<Index> lattice_to_interior;  // -1 outside
  std::vector<std::int32_t> neighbors;     // 2*dim per interior point, -1 = boundary
  double volume = 0.0;
  /// True when every non-outer lattice node is interior (a full box), which
  /// enables the sine-transform Poisson solver.
  bool full_box = false;

  Index size() const { return static_cast<Index>(interior.size()); }
  double cell_volume() const { return std::pow(h, dim); }
  std::vector<int> lattice_coords(Index lattice_index) const;
  std::vector<double> point(Index interior_index) const;
  double distance(Index interior_index, const std::vector<double>& center) const;
};

Grid build_grid(const DomainSpec& spec);

/// Reads "N h dim1 ... dimN" followed by one 0/1 flag per lattice node.
Grid read_mask_file(const std::string& path);
void write_mask_file(const std::string& path, const Grid& grid);

/// Inradius: half the shortest box side, the ball radius, or the maximum of
/// the Euclidean distance transform for mask domains.
double rho_max(const DomainSpec& spec);
double inradius(const Grid& grid);

/// Geometric centre of the domain (for masks, the point attaining the inradius).
std::vector<double> domain_center(const DomainSpec& spec, const Grid& grid);

namespace detail {
inline void check_shape(const Grid& grid, Index size) {
  if (size != grid.size()) {
    throw Error(ErrorKind::shape, "field has " + std::to_string(size) +
                                      " entries, grid has " + std::to_string(grid.size()));
  }
}
}  // namespace detail

/// -Δ_h u with the 2N+1 point stencil and zero values outside the interior.
template <typename Derived>
FieldT<typename Derived::Scalar> laplacian_apply(const Grid& grid,
                                                 const Eigen::MatrixBase<Derived>& u) {
  using Scalar = typename Derived::Scalar;
  detail::check_shape(grid, u.size());
  const int stencil = 2 * grid.dim;
  const Scalar inv_h2 = Scalar(1) / Scalar(grid.h * grid.h);
  FieldT<Scalar> out(u.size());
  for (Index i = 0; i < u.size(); ++i) {
    Scalar acc = Scalar(stencil) * u(i);
    const std::int32_t* nb = grid.neighbors.data() + i * stencil;
    for (int k = 0; k < stencil; ++k) {
      if (nb[k] >= 0) acc -= u(nb[k]);
    }
    out(i) = acc * inv_h2;
  }
  return out;
}

/// Midpoint quadrature: sum of v over interior points times h^N.
template <typename Derived>
typename Derived::Scalar integrate(const Grid& grid, const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  detail::check_shape(grid, v.size());
  return v.sum() * Scalar(grid.cell_volume());
}

/// Discrete L2 norm, sqrt(integrate(v^2)).
template <typename Derived>
typename Derived::Scalar l2_norm(const Grid& grid, const Eigen::MatrixBase<Derived>& v) {
  using std::sqrt;
  return sqrt(integrate(grid, v.cwiseAbs2()));
}

/// Sparse matrix of -Δ_h over the interior points (symmetric positive definite).
Eigen::SparseMatrix<double> stiffness_matrix(const Grid& grid);

/// Samples f(x) at every interior point.
template <typename F>
Field sample(const Grid& grid, F&& f) {
  Field out(grid.size());
  for (Index i = 0; i < grid.size(); ++i) out(i) = f(grid.point(i));
  return out;
}

}  // namespace logbn
