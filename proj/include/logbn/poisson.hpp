#pragma once

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>

#include <memory>

#include "logbn/domain.hpp"

namespace logbn {

/// Exact inverse of -Δ_h on a full box via the type-I discrete sine
/// transform. Usable as an Eigen preconditioner; in that role CG converges
/// in a single step.
class SinePreconditioner {
 public:
  SinePreconditioner();
  explicit SinePreconditioner(const Grid& grid);
  ~SinePreconditioner();
  SinePreconditioner(SinePreconditioner&&) noexcept;
  SinePreconditioner& operator=(SinePreconditioner&&) noexcept;

  void setup(const Grid& grid);

  template <typename MatType>
  SinePreconditioner& analyzePattern(const MatType&) { return *this; }
  template <typename MatType>
  SinePreconditioner& factorize(const MatType&) { return *this; }
  template <typename MatType>
  SinePreconditioner& compute(const MatType&) { return *this; }

  Field solve(const Field& rhs) const;
  Eigen::ComputationInfo info() const;

 private:
  struct Plan;
  std::unique_ptr<Plan> plan_;
};

/// Solves -Δ_h x = b with Dirichlet data by preconditioned CG: sine
/// transform preconditioner on full boxes, incomplete Cholesky elsewhere.
class PoissonSolver {
 public:
  explicit PoissonSolver(const Grid& grid, double tol = 1e-12);
  ~PoissonSolver();

  Field solve(const Field& rhs) const;
  /// Warm-started solve.
  Field solve(const Field& rhs, const Field& guess) const;
  void set_tolerance(double tol);
  bool spectral() const { return spectral_; }
  Index last_iterations() const { return last_iterations_; }

 private:
  using SineCG = Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                                          SinePreconditioner>;
  using CholCG = Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                                          Eigen::IncompleteCholesky<double>>;
  Field run(const Field& rhs, const Field* guess) const;

  const Grid* grid_;
  Eigen::SparseMatrix<double> matrix_;
  bool spectral_ = false;
  std::unique_ptr<SineCG> sine_;
  std::unique_ptr<CholCG> chol_;
  mutable Index last_iterations_ = 0;
};

}  // namespace logbn
