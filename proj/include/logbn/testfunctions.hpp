#pragma once

#include <string>
#include <vector>

#include "logbn/domain.hpp"
#include "logbn/functional.hpp"

namespace logbn {

/// u_ε(r) = [N(N−2)]^{(N−2)/4} (ε/(ε² + r²))^{(N−2)/2}
double instanton(int dim, double eps, double r);
/// du_ε/dr
double instanton_slope(int dim, double eps, double r);

enum class CutoffProfile { generic, radial_n4, radial_n3 };

const char* to_string(CutoffProfile profile);
CutoffProfile default_profile(int dim);

/// Radial cutoff: 1 on [0, ρ], quintic smoothstep down to 0 on [ρ, 2ρ].
struct CutoffSpec {
  double rho = 0.25;
  CutoffProfile profile = CutoffProfile::generic;
  std::vector<double> center;  // empty: the domain centre

  void validate() const;
};

double cutoff(double rho, double r);
double cutoff_slope(double rho, double r);

/// Samples U_ε = φ(|x − c|)·u_ε(|x − c|). Throws Error(resolution) when ε < 4h
/// and Error(usage) when B(c, 2ρ) leaves the domain.
Field test_function(const Grid& grid, const CutoffSpec& cut, double eps);

/// High-accuracy radial integrals of U_ε over ℝᴺ. The excesses
/// ∫|∇U_ε|² − S^{N/2} and ∫U_ε^{2*} − S^{N/2} are evaluated without
/// cancellation, from the identity ∫|∇u_ε|² = ∫u_ε^{2*} = S^{N/2}.
struct RadialIntegrals {
  double eps = 0.0;
  double gradient = 0.0;
  double critical = 0.0;
  double mass = 0.0;
  double log_mass = 0.0;
  double gradient_excess = 0.0;
  double critical_excess = 0.0;

  FiberIntegrals fiber() const { return {gradient, critical, mass, log_mass}; }
};

RadialIntegrals radial_integrals(int dim, double rho, double eps);

/// √3·ω₃·∫₀^{2ρ} φ² dr, the N = 3 limit of ∫U_ε²/ε and ∫U_ε² log U_ε²/(ε log ε).
double n3_mass_constant(double rho);

struct AsymptoticCheck {
  std::string name;
  double measured = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

struct AsymptoticsReport {
  int dim = 0;
  double rho = 0.0;
  std::vector<RadialIntegrals> rows;
  /// Per-ε normalized ratios (columns depend on N; see ratio_names).
  std::vector<std::string> ratio_names;
  std::vector<std::vector<double>> ratios;
  std::vector<AsymptoticCheck> checks;

  bool pass() const;
};

/// Requires ≥ 3 strictly decreasing ε values spanning a factor ≥ 4.
/// Limits with logarithmic corrections are extrapolated by a least-squares
/// fit in 1/log(1/ε).
AsymptoticsReport asymptotics_report(const CutoffSpec& cut, int dim, const std::vector<double>& eps_list);

void write_asymptotics_csv(const std::string& path, const AsymptoticsReport& report);
/// Rows, ratio columns and per-check measured/pass values; dim, rho and the
/// checks' expected values and tolerances are not stored in the file.
AsymptoticsReport read_asymptotics_csv(const std::string& path);

struct FiberMax {
  double t_star = 0.0;
  double level = 0.0;
};

/// max_{t>0} I(tU) from the fiber integrals of U. Throws Error(bracket)
/// when the maximum sits at the end of the scanned range.
FiberMax sup_t_energy(const FiberIntegrals& f, const Params& p);
FiberMax sup_t_energy(const Grid& grid, const Params& p, const Field& u);

/// (1/N)S^{N/2} − sup_t I(tU_ε) evaluated from the radial excesses so the
/// margin keeps full relative accuracy as ε → 0.
struct ThresholdMargin {
  double eps = 0.0;
  double t_star = 0.0;
  double level = 0.0;
  double threshold = 0.0;
  double margin = 0.0;
};

ThresholdMargin radial_threshold(const Params& p, double rho, double eps, double S);

}  // namespace logbn
