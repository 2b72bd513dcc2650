#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kgstar/initial_data.hpp"
#include "kgstar/quadrature.hpp"
#include "kgstar/solution.hpp"
#include "kgstar/spectral_core.hpp"

namespace kgstar {

/// I'_t = [t√(α'/(a2+α')), t√(β'/(a2+β'))], the stretch of branch 2 between
/// the inner group lines at time t.
struct ConeInterval {
  double t = 0.0;
  double x_low = 0.0;
  double x_high = 0.0;
};

ConeInterval cone_interval(double t, const EnergyBand& band, double a2);

struct NormOptions {
  double rel_tol = 1e-7;   ///< outer x-quadrature
  double tail_tol = 1e-4;  ///< stop doubling X_cut once [X, 2X] holds less than this fraction
  double x_cut_min = 64.0;
  int max_doublings = 8;
};

/// Raised when the branch tail is still significant after the allowed X_cut doublings.
class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, double x_cut) : std::runtime_error(what), x_cut_(x_cut) {}
  double x_cut() const { return x_cut_; }

 private:
  double x_cut_;
};

struct BranchNorm {
  double norm = 0.0;
  double error = 0.0;  ///< quadrature error estimate of norm²
  double x_cut = 0.0;
  double plancherel_bound = 0.0;
};

struct ConeNorm {
  double norm = 0.0;
  double error = 0.0;
  ConeInterval interval;
};

/// ‖u₊(t,·)‖_{L²(0, X_cut)} by x-quadrature, X_cut = max(2t, x_cut_min) doubled
/// until the tail criterion holds; also carries the closed-form Plancherel bound.
BranchNorm l2_branch(double t, const SpectralProfile& profile, const BranchPotentials& pots,
                     const QuadratureConfig& quad, double cq = kPlancherelConstant, const NormOptions& opts = {});

/// ‖u₊(t,·)‖_{L²(I'_t)}.
ConeNorm l2_cone(double t, const SpectralProfile& profile, const BranchPotentials& pots,
                 const QuadratureConfig& quad, double cq = kPlancherelConstant, const NormOptions& opts = {});

/// √β / (√(a2 - a1 + α) α^{1/4}) · ‖ψ‖_{L²((α,β))}
double plancherel_bound(const SpectralProfile& profile, const BranchPotentials& pots);
/// (√β / α^{1/4}) ‖ψ‖ a2^{-1/2}
double plancherel_bound_asymptote(const SpectralProfile& profile, double a2);

/// (f m - ε)² (√(β'/(a2+β')) - √(α'/(a2+α')))
double cone_lower_display(double fm, double eps, const EnergyBand& band, double a2);
/// (g + ε)² (√(β/(a2+β)) - √(α/(a2+α)))
double cone_upper_display(double g, double eps, const EnergyBand& band, double a2);
/// 2πβ(√β - √α) a2^{-1}
double cone_upper_asymptote(const EnergyBand& band, double a2);

/// Global/cone ratio bound at finite a2 with ε = 0. Uses √(a2 - a1 + α), the
/// same factor as the branch bound.
double ratio_bound(const SpectralProfile& profile, const BranchPotentials& pots, double eps = 0.0);
/// (2π)^{-1/2} m^{-1} β^{1/2} α^{-3/4} (√β' - √α')^{-1/2} ‖ψ‖
double ratio_bound_asymptote(const SpectralProfile& profile);

struct EnergyReport {
  double t = 0.0;
  double a2 = 0.0;
  double norm_branch = 0.0;
  double norm_cone = 0.0;
  double ratio = 0.0;
  double bound_upper_branch = 0.0;  ///< Plancherel bound on norm_branch
  double bound_lower_cone = 0.0;    ///< lower display for norm_cone²
  double bound_upper_cone = 0.0;    ///< upper display for norm_cone²
  double bound_ratio = 0.0;         ///< ratio bound, ε = 0
  double bound_ratio_asymptote = 0.0;
  double x_cut = 0.0;
  bool failed = false;
  std::string error;

  double margin_branch() const { return bound_upper_branch - norm_branch; }
  double margin_lower_cone() const { return norm_cone * norm_cone - bound_lower_cone; }
  double margin_upper_cone() const { return bound_upper_cone - norm_cone * norm_cone; }
  double margin_ratio() const { return bound_ratio - ratio; }
};

struct RatioReportOptions {
  double a1 = 0.0;
  ProfileShape shape = ProfileShape::plateau;
  double eps_fraction = 0.05;  ///< ε = eps_fraction · f m
  int jobs = 1;
  double cq = kPlancherelConstant;
  NormOptions norms;
};

/// One report per (t, a2), a2 outer, t inner. Cells whose quadrature fails are
/// flagged rather than aborting the sweep.
std::vector<EnergyReport> ratio_report(std::span<const double> t_list, std::span<const double> a2_list,
                                       const EnergyBand& band, const QuadratureConfig& quad,
                                       const RatioReportOptions& opts = {});

/// CSV with the header documented in docs/csv_formats.md.
void write_csv(std::ostream& os, const std::vector<EnergyReport>& rows);

/// Smallest t in the (ascending) list such that `ok` holds for it and every later t.
template <class Pred>
std::optional<double> locate_t0(std::span<const EnergyReport> rows, Pred ok) {
  std::optional<double> t0;
  for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
    if (it->failed || !ok(*it)) break;
    t0 = it->t;
  }
  return t0;
}

struct DecayFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  ///< RMS residual in log space
};

/// Least-squares line through (log t, log value). Needs >= 3 samples with
/// positive t and value, and nonzero spread in t.
DecayFit decay_fit(std::span<const std::pair<double, double>> samples);

}  // namespace kgstar
