#pragma once

// Verification experiments shared by the command-line driver and the
// acceptance binary. Each returns raw measurements; pass/fail thresholds are
// applied by the caller.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "kgstar/asymptotics.hpp"
#include "kgstar/energy_flow.hpp"
#include "kgstar/fdtd.hpp"
#include "kgstar/initial_data.hpp"
#include "kgstar/quadrature.hpp"
#include "kgstar/spectral_core.hpp"
#include "kgstar/transform.hpp"

namespace kgstar {

/// n points log-spaced on [lo, hi], endpoints included.
std::vector<double> log_grid(double lo, double hi, int n);

// ---------------------------------------------------------------- transform

struct PlancherelCase {
  BranchPotentials pots;
  double h_norm = 0.0;
  double q_norm = 0.0;     ///< with the configured c_q
  double unit_ratio = 0.0; ///< |Vf|²_q / ‖f‖²_H evaluated with c_q = 1
  double rel_dev = 0.0;    ///< |q_norm - h_norm| / h_norm
};

struct PlancherelSuite {
  std::vector<PlancherelCase> cases;
  double max_rel_dev = 0.0;
  double measured_constant = 0.0;  ///< mean unit_ratio; π for unit weights (c_q = 1)
  double calibrated_cq = 0.0;      ///< 1 / measured_constant
};

/// Random pairs of truncated modulated Gaussians on random potentials.
PlancherelSuite run_plancherel(int count, std::uint64_t seed, const QuadratureConfig& quad, double cq, int jobs);

struct RoundTripCase {
  EnergyBand band;
  BranchPotentials pots;
  RoundTripReport report;
};

std::vector<EnergyBand> round_trip_bands();
std::vector<BranchPotentials> round_trip_potentials();
std::vector<RoundTripCase> run_round_trips(std::span<const EnergyBand> bands, std::span<const BranchPotentials> pots,
                                           ProfileShape shape, const QuadratureConfig& quad, double cq, int jobs);

// ---------------------------------------------------------------- decay and remainder

/// n slopes t/x spread strictly inside the inner cone.
std::vector<double> inner_rays(const ConeSpec& cone, int n);

struct RaySample {
  double t = 0.0;
  double x = 0.0;
  cplx u{};
  cplx h{};                ///< H(t, x)
  double scaled_rem = 0.0; ///< t |u₊ - H t^{-1/2}|
};

struct RayResult {
  double slope = 0.0;  ///< t/x
  std::vector<RaySample> samples;
  std::optional<DecayFit> fit;  ///< of |u₊| against t; empty for a zero profile
  double rem_first = 0.0;
  double rem_max = 0.0;
};

std::vector<RayResult> run_decay(const SpectralProfile& profile, const BranchPotentials& pots,
                                 std::span<const double> slopes, std::span<const double> t_list,
                                 const QuadratureConfig& quad, double cq, int jobs);

// ---------------------------------------------------------------- coefficient sandwich

struct SandwichSample {
  double a2 = 0.0;
  double t = 0.0;
  double x = 0.0;
  ConeKind cone = ConeKind::outer;
  double abs_h = 0.0;  ///< coefficient_modulus
  double g = 0.0;
  double fm = 0.0;
};

struct SandwichResult {
  std::vector<SandwichSample> samples;
  double min_upper_margin = 0.0;  ///< min (g - |H|) over outer-cone samples
  double min_lower_margin = 0.0;  ///< min (|H| - f m) over inner-cone samples
  double min_lower_ratio = 0.0;   ///< min |H| / (f m) over inner-cone samples
  int upper_violations = 0;
  int lower_violations = 0;
};

/// `count` random points split evenly over the a2 values and the two cones,
/// with t log-uniform in [t_lo, t_hi]. |H| is coefficient_modulus,
/// the quantity g and f·m bound.
SandwichResult run_sandwich(const EnergyBand& band, double a1, ProfileShape shape, std::span<const double> a2_list,
                            int count, double t_lo, double t_hi, std::uint64_t seed);

struct AsymptoteRatios {
  double a2 = 0.0;
  double g_ratio = 0.0;  ///< g / (√(2πβ) a2^{-1/4})
  double f_ratio = 0.0;  ///< f m / (√(2πα) a2^{-1/4} m)
  double branch_bound_ratio = 0.0;
};

AsymptoteRatios asymptote_ratios(const EnergyBand& band, double a1, double a2);

// ---------------------------------------------------------------- energy

struct ScalingPoint {
  double a2 = 0.0;
  double value = 0.0;
  double bound = 0.0;
};

struct ScalingResult {
  std::vector<ScalingPoint> points;
  std::optional<DecayFit> fit;  ///< log-log fit of value against a2
};

/// ‖u₊(t,·)‖ on the whole branch at fixed t over the a2 values.
ScalingResult run_branch_scaling(double t, std::span<const double> a2_list, const EnergyBand& band, double a1,
                                 ProfileShape shape, const QuadratureConfig& quad, double cq, int jobs);
/// Squared cone norm at fixed t over the a2 values; bound is the asymptotic upper display.
ScalingResult run_cone_scaling(double t, std::span<const double> a2_list, const EnergyBand& band, double a1,
                               ProfileShape shape, const QuadratureConfig& quad, double cq, int jobs);

struct ConeWindow {
  double a2 = 0.0;
  std::vector<EnergyReport> rows;    ///< ascending t
  std::optional<double> t0_cone;     ///< both cone displays hold from here on
  std::optional<double> t0_ratio;    ///< ratio bound holds from here on
  double max_ratio_after_t0 = 0.0;   ///< over t >= the t0 used (cone t0, else ratio t0)
  std::optional<double> t0_used;
};

/// Groups a ratio_report by a2 and locates t0 values no larger than t0_cap.
std::vector<ConeWindow> cone_windows(const std::vector<EnergyReport>& rows, double t0_cap);

// ---------------------------------------------------------------- FDTD

struct FdtdRun {
  double dx = 0.0;
  std::vector<ComparisonStats> stats;  ///< one per requested time
  double energy_drift = 0.0;           ///< max relative deviation from the first staggered energy
  double initial_energy = 0.0;
  long steps = 0;
};

struct FdtdSetup {
  std::vector<double> dx_list{0.01, 0.005};
  std::vector<double> t_list{5.0, 10.0, 20.0};
  double x_compare = 60.0;
  double spacing = 0.1;
  double length = 160.0;
};

std::vector<FdtdRun> run_fdtd(const SpectralProfile& profile, const BranchPotentials& pots, const FdtdSetup& setup,
                              const QuadratureConfig& quad, double cq, int jobs);

// ---------------------------------------------------------------- identities

struct IdentityResult {
  int points = 0;
  int cone_violations = 0;        ///< outer cone ⟺ p₀ ∈ [√α, √β] ⟺ a2 + p₀² ∈ band support
  int inner_violations = 0;       ///< inner cone ⟺ p₀ ∈ [√α', √β']
  int derivative_violations = 0;  ///< central difference of φ at p₀ not O(h²)
  double max_derivative_ratio = 0.0;  ///< max |D_h φ(p₀)| / (|φ'''(p₀)| h²/6)
};

IdentityResult run_identities(const EnergyBand& band, const BranchPotentials& pots, int count, std::uint64_t seed);

}  // namespace kgstar
