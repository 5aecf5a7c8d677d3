#pragma once

#include <optional>
#include <string>
#include <vector>

#include "logbn/functional.hpp"
#include "logbn/solvers.hpp"

namespace logbn {

enum class RegionLabel { A0_exists, B0_exists, C0_exists, N4_exists_eta3, nonexistence_T14, unknown };

const char* to_string(RegionLabel label);

struct RegionVerdict {
  RegionLabel label = RegionLabel::unknown;
  /// Short tag naming the rule that decided the label.
  std::string basis;
  /// Signed value of the deciding inequality: > 0 inside an existence
  /// region, ≥ 0 for nonexistence, ≤ 0 for unknown.
  double margin = 0.0;
};

struct DomainConstants {
  double lambda1 = 0.0;
  double volume = 0.0;
  double S = 0.0;
  double rho_max = 0.0;
  int dim = 3;

  void validate() const;
};

/// Value of each rule's inequality; a curve is the zero set of one of them.
struct RuleMargins {
  double nonexistence = 0.0;  // ≥ 0 ⇒ no positive solution (μ < 0); zero set τ₁
  double alpha_b0 = 0.0;      // (1/N)((λ₁−λ)/λ₁)^{N/2}S^{N/2} + (μ/2)|Ω|; zero set η₁
  double alpha_c0 = 0.0;      // (1/N)S^{N/2} + (μ/2)e^{−λ/μ}|Ω|; zero set η₂
  double eta3 = 0.0;          // ρ_max² − 32e^{λ/μ}; zero set η₃
  double b0 = 0.0;            // min(λ, λ₁ − λ, −μ, alpha_b0): B₀ membership iff > 0 (λ = 0 included)
  double c0 = 0.0;            // min(−μ, alpha_c0)
};

RuleMargins rule_margins(const Params& p, const DomainConstants& k);

/// Precedence: nonexistence predicate (μ < 0), A₀ (μ > 0, N ≥ 4), B₀ ∪ C₀
/// for N = 3, B₀ ∪ C₀ with the η₃ condition for N = 4, otherwise unknown.
RegionVerdict classify(const Params& p, const DomainConstants& k);

/// −(N−2)μ/2 + (N−2)μ/2·log(−(N−2)μ/2) + λ − λ₁
double nonexistence_value(const Params& p, double lambda1);
/// False for μ ≥ 0.
bool nonexistence_predicate(const Params& p, double lambda1);

struct FMin {
  double s0 = 0.0;
  double fmin = 0.0;
  /// Smallest f over 10⁵ log-spaced s in [1e-8, 1e8].
  double scan_min = 0.0;
  bool scan_consistent = false;
};

/// Minimizer of f(s) = s^{2*−2} + μ log s² + λ − λ₁. Throws Error(regime) for μ ≥ 0.
FMin f_min(const Params& p, double lambda1);

enum class Curve { tau1, eta1, eta2, eta3 };

const char* to_string(Curve c);
Curve parse_curve(const std::string& text);

struct CurveSample {
  Curve curve = Curve::tau1;
  double mu = 0.0;
  double lambda = 0.0;
};

struct CurveSamples {
  std::vector<CurveSample> samples;
  std::vector<std::string> notes;  // skipped μ values
};

/// count evenly spaced μ in [mu_min, mu_max] ⊂ (−∞, 0).
CurveSamples curve_samples(Curve curve, double mu_min, double mu_max, const DomainConstants& k, int count);

/// Relative residual of a sample in its defining equation.
double curve_residual(const CurveSample& s, const DomainConstants& k);

struct PhaseCell {
  double lambda = 0.0;
  double mu = 0.0;
  RegionVerdict verdict;
  bool confirmed = false;
  std::string observed;         // solver status when confirmed
  std::optional<bool> agrees;   // empty for unknown cells
};

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

std::vector<PhaseCell> phase_diagram(const DomainConstants& k, Range lambda, Range mu, int res);

/// Runs mountain_pass_solve on at most budget evenly strided cells and
/// records the outcome: converged agrees with an existence label,
/// collapsed_to_zero or max_iter with nonexistence. Unknown cells are only
/// observed.
void confirm_cells(std::vector<PhaseCell>& cells, const Grid& grid, const MPConfig& cfg, int budget,
                   const SpectralPair* eig = nullptr);

void write_phase_csv(const std::string& path, const std::vector<PhaseCell>& cells);
void write_curves_csv(const std::string& path, const std::vector<CurveSample>& samples);
std::vector<PhaseCell> read_phase_csv(const std::string& path);
std::vector<CurveSample> read_curves_csv(const std::string& path);
RegionLabel parse_region_label(const std::string& text);

bool is_existence(RegionLabel label);

}  // namespace logbn
