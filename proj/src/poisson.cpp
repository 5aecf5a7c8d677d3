#include "logbn/poisson.hpp"

#include <fftw3.h>

#include <mutex>
#include <numbers>

namespace logbn {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct SinePreconditioner::Plan {
  fftw_plan plan = nullptr;
  Field inverse_eigenvalues;
  double scale = 1.0;
  mutable Field buffer;

  ~Plan() {
    if (plan) {
      std::lock_guard lock(planner_mutex());
      fftw_destroy_plan(plan);
    }
  }
};

SinePreconditioner::SinePreconditioner() = default;
SinePreconditioner::SinePreconditioner(const Grid& grid) { setup(grid); }
SinePreconditioner::~SinePreconditioner() = default;
SinePreconditioner::SinePreconditioner(SinePreconditioner&&) noexcept = default;
SinePreconditioner& SinePreconditioner::operator=(SinePreconditioner&&) noexcept = default;

void SinePreconditioner::setup(const Grid& grid) {
  if (!grid.full_box) throw Error(ErrorKind::usage, "sine transform solver needs a full box grid");
  auto p = std::make_unique<Plan>();
  const int n = grid.dim;
  std::vector<int> sizes(static_cast<std::size_t>(n));
  std::vector<fftw_r2r_kind> kinds(static_cast<std::size_t>(n), FFTW_RODFT00);
  double norm = 1.0;
  for (int a = 0; a < n; ++a) {
    sizes[static_cast<std::size_t>(a)] = grid.dims[static_cast<std::size_t>(a)] - 2;
    norm *= 2.0 * (grid.dims[static_cast<std::size_t>(a)] - 1);
  }
  p->scale = 1.0 / norm;
  p->buffer.resize(grid.size());

  // eigenvalue of mode k = (k_1..k_N), k_i ≥ 1: Σ (4/h²) sin²(π k_i / (2 n_i))
  std::vector<std::vector<double>> axis(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    const int intervals = grid.dims[static_cast<std::size_t>(a)] - 1;
    for (int k = 1; k < intervals; ++k) {
      const double s = std::sin(std::numbers::pi * k / (2.0 * intervals));
      axis[static_cast<std::size_t>(a)].push_back(4.0 * s * s / (grid.h * grid.h));
    }
  }
  p->inverse_eigenvalues.resize(grid.size());
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  for (Index i = 0; i < grid.size(); ++i) {
    double ev = 0.0;
    for (int a = 0; a < n; ++a) ev += axis[static_cast<std::size_t>(a)][static_cast<std::size_t>(idx[static_cast<std::size_t>(a)])];
    p->inverse_eigenvalues(i) = p->scale / ev;
    for (int a = n - 1; a >= 0; --a) {
      if (++idx[static_cast<std::size_t>(a)] < sizes[static_cast<std::size_t>(a)]) break;
      idx[static_cast<std::size_t>(a)] = 0;
    }
  }
  {
    std::lock_guard lock(planner_mutex());
    p->plan = fftw_plan_r2r(n, sizes.data(), p->buffer.data(), p->buffer.data(), kinds.data(),
                            FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  if (!p->plan) throw Error(ErrorKind::usage, "FFTW could not plan the sine transform");
  plan_ = std::move(p);
}

Field SinePreconditioner::solve(const Field& rhs) const {
  if (!plan_) return rhs;
  Field out = rhs;
  fftw_execute_r2r(plan_->plan, out.data(), out.data());
  out.array() *= plan_->inverse_eigenvalues.array();
  fftw_execute_r2r(plan_->plan, out.data(), out.data());
  return out;
}

Eigen::ComputationInfo SinePreconditioner::info() const { return Eigen::Success; }

PoissonSolver::PoissonSolver(const Grid& grid, double tol)
    : grid_(&grid), matrix_(stiffness_matrix(grid)), spectral_(grid.full_box) {
  if (spectral_) {
    sine_ = std::make_unique<SineCG>();
    sine_->preconditioner().setup(grid);
    sine_->compute(matrix_);
  } else {
    chol_ = std::make_unique<CholCG>();
    chol_->compute(matrix_);
    if (chol_->info() != Eigen::Success) {
      throw Error(ErrorKind::convergence, "incomplete Cholesky factorization failed");
    }
  }
  set_tolerance(tol);
}

PoissonSolver::~PoissonSolver() = default;

void PoissonSolver::set_tolerance(double tol) {
  if (sine_) {
    sine_->setTolerance(tol);
    sine_->setMaxIterations(200);
  } else {
    chol_->setTolerance(tol);
    chol_->setMaxIterations(std::max<Index>(1000, 4 * grid_->size()));
  }
}

Field PoissonSolver::run(const Field& rhs, const Field* guess) const {
  detail::check_shape(*grid_, rhs.size());
  Field x;
  Eigen::ComputationInfo info;
  if (sine_) {
    x = guess ? Field(sine_->solveWithGuess(rhs, *guess)) : Field(sine_->solve(rhs));
    info = sine_->info();
    last_iterations_ = sine_->iterations();
  } else {
    x = guess ? Field(chol_->solveWithGuess(rhs, *guess)) : Field(chol_->solve(rhs));
    info = chol_->info();
    last_iterations_ = chol_->iterations();
  }
  if (info != Eigen::Success && !x.allFinite()) {
    throw Error(ErrorKind::convergence, "Poisson solve did not converge");
  }
  return x;
}

Field PoissonSolver::solve(const Field& rhs) const { return run(rhs, nullptr); }
Field PoissonSolver::solve(const Field& rhs, const Field& guess) const { return run(rhs, &guess); }

}  // namespace logbn
