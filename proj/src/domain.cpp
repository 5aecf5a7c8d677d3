#include "logbn/domain.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

namespace logbn {

const char* to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::box: return "box";
    case DomainKind::ball: return "ball";
    case DomainKind::mask_file: return "mask-file";
  }
  return "box";
}

DomainKind parse_domain_kind(const std::string& text) {
  if (text == "box" || text == "cube") return DomainKind::box;
  if (text == "ball") return DomainKind::ball;
  if (text == "mask" || text == "mask-file" || text == "mask_file") return DomainKind::mask_file;
  throw Error(ErrorKind::usage, "domain: unknown kind '" + text + "'");
}

void DomainSpec::validate() const {
  if (dim < 3 || dim > 5) {
    throw Error(ErrorKind::usage, "N: dimension must be 3, 4 or 5, got " + std::to_string(dim));
  }
  if (kind == DomainKind::mask_file) {
    if (mask_path.empty()) throw Error(ErrorKind::usage, "mask: mask-file domain needs a path");
    return;
  }
  if (extents.empty()) throw Error(ErrorKind::usage, "extents: missing");
  if (kind == DomainKind::box && extents.size() != 1 && static_cast<int>(extents.size()) != dim) {
    throw Error(ErrorKind::usage, "extents: need 1 or N values for a box");
  }
  for (double e : extents) {
    if (!(e > 0.0) || !std::isfinite(e)) throw Error(ErrorKind::usage, "extents: must be positive");
  }
  if (!(resolution >= 8.0)) {
    throw Error(ErrorKind::degenerate_domain, "resolution: must be at least 8 points per unit length");
  }
}

double DomainSpec::extent(int axis) const {
  return extents.size() == 1 ? extents.front() : extents.at(static_cast<std::size_t>(axis));
}

std::vector<int> Grid::lattice_coords(Index lattice_index) const {
  std::vector<int> c(static_cast<std::size_t>(dim));
  for (int a = dim - 1; a >= 0; --a) {
    c[static_cast<std::size_t>(a)] = static_cast<int>(lattice_index % dims[static_cast<std::size_t>(a)]);
    lattice_index /= dims[static_cast<std::size_t>(a)];
  }
  return c;
}

std::vector<double> Grid::point(Index interior_index) const {
  auto c = lattice_coords(interior[static_cast<std::size_t>(interior_index)]);
  std::vector<double> x(static_cast<std::size_t>(dim));
  for (std::size_t a = 0; a < x.size(); ++a) x[a] = origin[a] + h * c[a];
  return x;
}

double Grid::distance(Index interior_index, const std::vector<double>& center) const {
  auto x = point(interior_index);
  double r2 = 0.0;
  for (std::size_t a = 0; a < x.size(); ++a) r2 += (x[a] - center[a]) * (x[a] - center[a]);
  return std::sqrt(r2);
}

namespace {

Index lattice_size(const std::vector<int>& dims) {
  return std::accumulate(dims.begin(), dims.end(), Index{1},
                         [](Index acc, int d) { return acc * d; });
}

// Fills interior ordering, neighbour table, volume and the full_box flag
// from grid.mask.
void finalize(Grid& grid) {
  const Index total = lattice_size(grid.dims);
  grid.interior.clear();
  grid.lattice_to_interior.assign(static_cast<std::size_t>(total), -1);
  for (Index li = 0; li < total; ++li) {
    if (grid.mask[static_cast<std::size_t>(li)]) {
      grid.lattice_to_interior[static_cast<std::size_t>(li)] = static_cast<Index>(grid.interior.size());
      grid.interior.push_back(li);
    }
  }
  if (grid.interior.empty()) {
    throw Error(ErrorKind::degenerate_domain, "domain has no interior points at this resolution");
  }
  std::vector<Index> stride(static_cast<std::size_t>(grid.dim));
  Index s = 1;
  for (int a = grid.dim - 1; a >= 0; --a) {
    stride[static_cast<std::size_t>(a)] = s;
    s *= grid.dims[static_cast<std::size_t>(a)];
  }
  const int stencil = 2 * grid.dim;
  grid.neighbors.assign(grid.interior.size() * static_cast<std::size_t>(stencil), -1);
  for (std::size_t i = 0; i < grid.interior.size(); ++i) {
    const Index li = grid.interior[i];
    const auto c = grid.lattice_coords(li);
    for (int a = 0; a < grid.dim; ++a) {
      const auto ua = static_cast<std::size_t>(a);
      if (c[ua] > 0) {
        grid.neighbors[i * stencil + 2 * ua] =
            static_cast<std::int32_t>(grid.lattice_to_interior[static_cast<std::size_t>(li - stride[ua])]);
      }
      if (c[ua] + 1 < grid.dims[ua]) {
        grid.neighbors[i * stencil + 2 * ua + 1] =
            static_cast<std::int32_t>(grid.lattice_to_interior[static_cast<std::size_t>(li + stride[ua])]);
      }
    }
  }
  grid.volume = static_cast<double>(grid.interior.size()) * grid.cell_volume();

  Index box_count = 1;
  for (int d : grid.dims) box_count *= std::max(d - 2, 0);
  grid.full_box = box_count == grid.size();
}

}  // namespace

Grid build_grid(const DomainSpec& spec) {
  spec.validate();
  if (spec.kind == DomainKind::mask_file) return read_mask_file(spec.mask_path);

  Grid grid;
  grid.dim = spec.dim;
  grid.h = 1.0 / spec.resolution;
  const auto n = static_cast<std::size_t>(spec.dim);
  grid.dims.resize(n);
  grid.origin.resize(n);

  if (spec.kind == DomainKind::box) {
    for (std::size_t a = 0; a < n; ++a) {
      const int intervals = static_cast<int>(std::lround(spec.extent(static_cast<int>(a)) * spec.resolution));
      grid.dims[a] = std::max(intervals, 0) + 1;
      grid.origin[a] = 0.0;
    }
  } else {
    const double radius = spec.extents.front();
    const int intervals = static_cast<int>(std::lround(2.0 * radius * spec.resolution));
    for (std::size_t a = 0; a < n; ++a) {
      grid.dims[a] = std::max(intervals, 0) + 1;
      grid.origin[a] = -radius;
    }
  }

  const Index total = lattice_size(grid.dims);
  grid.mask.assign(static_cast<std::size_t>(total), 0);
  for (Index li = 0; li < total; ++li) {
    const auto c = grid.lattice_coords(li);
    bool inside = true;
    double r2 = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
      if (c[a] == 0 || c[a] == grid.dims[a] - 1) inside = false;
      const double x = grid.origin[a] + grid.h * c[a];
      r2 += x * x;
    }
    if (spec.kind == DomainKind::ball) {
      const double radius = spec.extents.front();
      inside = inside && r2 < radius * radius;
    }
    grid.mask[static_cast<std::size_t>(li)] = inside ? 1 : 0;
  }
  finalize(grid);
  return grid;
}

Grid read_mask_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open mask file " + path);
  Grid grid;
  if (!(in >> grid.dim >> grid.h)) throw Error(ErrorKind::io, "mask file: bad header in " + path);
  if (grid.dim < 3 || grid.dim > 5) throw Error(ErrorKind::usage, "N: mask file dimension must be 3, 4 or 5");
  if (!(grid.h > 0.0)) throw Error(ErrorKind::usage, "mask file: spacing must be positive");
  grid.dims.resize(static_cast<std::size_t>(grid.dim));
  for (int& d : grid.dims) {
    if (!(in >> d) || d < 1) throw Error(ErrorKind::io, "mask file: bad dimensions in " + path);
  }
  grid.origin.assign(static_cast<std::size_t>(grid.dim), 0.0);
  const Index total = lattice_size(grid.dims);
  grid.mask.resize(static_cast<std::size_t>(total));
  for (Index li = 0; li < total; ++li) {
    int flag = 0;
    if (!(in >> flag) || (flag != 0 && flag != 1)) {
      throw Error(ErrorKind::io, "mask file: expected " + std::to_string(total) + " 0/1 flags in " + path);
    }
    grid.mask[static_cast<std::size_t>(li)] = static_cast<std::uint8_t>(flag);
  }
  finalize(grid);
  return grid;
}

void write_mask_file(const std::string& path, const Grid& grid) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io, "cannot write mask file " + path);
  out.precision(17);
  out << grid.dim << ' ' << grid.h;
  for (int d : grid.dims) out << ' ' << d;
  out << '\n';
  for (std::size_t li = 0; li < grid.mask.size(); ++li) {
    out << static_cast<int>(grid.mask[li]) << ((li + 1) % static_cast<std::size_t>(grid.dims.back()) == 0 ? '\n' : ' ');
  }
}

namespace {

// Squared Euclidean distance transform along one line (Felzenszwalb & Huttenlocher).
void edt_1d(const std::vector<double>& f, std::vector<double>& d) {
  const int n = static_cast<int>(f.size());
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<int> v(static_cast<std::size_t>(n));
  std::vector<double> z(static_cast<std::size_t>(n) + 1);
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (f[static_cast<std::size_t>(q)] == inf) continue;
    while (k >= 0) {
      const int p = v[static_cast<std::size_t>(k)];
      const double s = ((f[static_cast<std::size_t>(q)] + q * q) - (f[static_cast<std::size_t>(p)] + p * p)) / (2.0 * (q - p));
      if (s <= z[static_cast<std::size_t>(k)]) {
        --k;
      } else {
        break;
      }
    }
    ++k;
    v[static_cast<std::size_t>(k)] = q;
    z[static_cast<std::size_t>(k)] = k == 0 ? -inf : 0.0;
    if (k > 0) {
      const int p = v[static_cast<std::size_t>(k - 1)];
      z[static_cast<std::size_t>(k)] = ((f[static_cast<std::size_t>(q)] + q * q) - (f[static_cast<std::size_t>(p)] + p * p)) / (2.0 * (q - p));
    }
    z[static_cast<std::size_t>(k) + 1] = inf;
  }
  if (k < 0) {
    std::fill(d.begin(), d.end(), inf);
    return;
  }
  int j = 0;
  for (int q = 0; q < n; ++q) {
    while (z[static_cast<std::size_t>(j) + 1] < q) ++j;
    const int p = v[static_cast<std::size_t>(j)];
    d[static_cast<std::size_t>(q)] = (q - p) * (q - p) + f[static_cast<std::size_t>(p)];
  }
}

}  // namespace

double inradius(const Grid& grid) {
  // Pad the lattice by one node per side so that nodes beyond the lattice
  // count as boundary.
  const auto n = static_cast<std::size_t>(grid.dim);
  std::vector<int> pdims(n);
  for (std::size_t a = 0; a < n; ++a) pdims[a] = grid.dims[a] + 2;
  const Index total = lattice_size(pdims);
  std::vector<Index> stride(n);
  Index s = 1;
  for (int a = grid.dim - 1; a >= 0; --a) {
    stride[static_cast<std::size_t>(a)] = s;
    s *= pdims[static_cast<std::size_t>(a)];
  }
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(static_cast<std::size_t>(total), 0.0);
  for (Index pi = 0; pi < total; ++pi) {
    Index rem = pi;
    Index li = 0;
    bool on_pad = false;
    Index lstride = 1;
    for (int a = grid.dim - 1; a >= 0; --a) {
      const auto ua = static_cast<std::size_t>(a);
      const int c = static_cast<int>(rem % pdims[ua]) - 1;
      rem /= pdims[ua];
      if (c < 0 || c >= grid.dims[ua]) on_pad = true;
      li += static_cast<Index>(std::max(c, 0)) * lstride;
      lstride *= grid.dims[ua];
    }
    const bool feature = on_pad || grid.mask[static_cast<std::size_t>(li)] == 0;
    dist[static_cast<std::size_t>(pi)] = feature ? 0.0 : inf;
  }
  for (std::size_t a = 0; a < n; ++a) {
    const int len = pdims[a];
    std::vector<double> f(static_cast<std::size_t>(len)), d(static_cast<std::size_t>(len));
    for (Index start = 0; start < total; ++start) {
      // start must be the first node of a line along axis a
      if ((start / stride[a]) % len != 0) continue;
      for (int q = 0; q < len; ++q) f[static_cast<std::size_t>(q)] = dist[static_cast<std::size_t>(start + q * stride[a])];
      edt_1d(f, d);
      for (int q = 0; q < len; ++q) dist[static_cast<std::size_t>(start + q * stride[a])] = d[static_cast<std::size_t>(q)];
    }
  }
  const double best = *std::max_element(dist.begin(), dist.end());
  return std::sqrt(best) * grid.h;
}

double rho_max(const DomainSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case DomainKind::box: {
      double m = spec.extent(0);
      for (int a = 1; a < spec.dim; ++a) m = std::min(m, spec.extent(a));
      return 0.5 * m;
    }
    case DomainKind::ball:
      return spec.extents.front();
    case DomainKind::mask_file:
      return inradius(read_mask_file(spec.mask_path));
  }
  return 0.0;
}

std::vector<double> domain_center(const DomainSpec& spec, const Grid& grid) {
  const auto n = static_cast<std::size_t>(grid.dim);
  std::vector<double> c(n, 0.0);
  if (spec.kind == DomainKind::box) {
    for (std::size_t a = 0; a < n; ++a) c[a] = 0.5 * spec.extent(static_cast<int>(a));
    return c;
  }
  if (spec.kind == DomainKind::ball) return c;
  // Mask: interior point farthest from the exterior (brute force over boundary-adjacent points).
  std::vector<Index> rim;
  const int stencil = 2 * grid.dim;
  for (Index i = 0; i < grid.size(); ++i) {
    for (int k = 0; k < stencil; ++k) {
      if (grid.neighbors[static_cast<std::size_t>(i * stencil + k)] < 0) {
        rim.push_back(i);
        break;
      }
    }
  }
  double best = -1.0;
  for (Index i = 0; i < grid.size(); ++i) {
    const auto x = grid.point(i);
    double nearest = std::numeric_limits<double>::infinity();
    for (Index j : rim) nearest = std::min(nearest, grid.distance(j, x));
    if (nearest > best) {
      best = nearest;
      c = x;
    }
  }
  return c;
}

Eigen::SparseMatrix<double> stiffness_matrix(const Grid& grid) {
  const int stencil = 2 * grid.dim;
  const double inv_h2 = 1.0 / (grid.h * grid.h);
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(grid.size()) * static_cast<std::size_t>(stencil + 1));
  for (Index i = 0; i < grid.size(); ++i) {
    triplets.emplace_back(i, i, stencil * inv_h2);
    for (int k = 0; k < stencil; ++k) {
      const auto j = grid.neighbors[static_cast<std::size_t>(i * stencil + k)];
      if (j >= 0) triplets.emplace_back(i, j, -inv_h2);
    }
  }
  Eigen::SparseMatrix<double> a(grid.size(), grid.size());
  a.setFromTriplets(triplets.begin(), triplets.end());
  a.makeCompressed();
  return a;
}

}  // namespace logbn
