#pragma once

#include "kgstar/initial_data.hpp"
#include "kgstar/solution.hpp"
#include "kgstar/spectral_core.hpp"

namespace kgstar {

/// (t, x) at or outside the light cone t > x, where p₀ and the amplitudes are undefined.
class OutsideLightCone : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Group-velocity cones of the band. A point is inside the outer cone when
/// slope_low <= t/x <= slope_high, and inside the inner cone for the primed edges.
struct ConeSpec {
  double slope_low = 0.0;         ///< √((a2+β)/β)
  double slope_high = 0.0;        ///< √((a2+α)/α)
  double inner_slope_low = 0.0;   ///< √((a2+β')/β')
  double inner_slope_high = 0.0;  ///< √((a2+α')/α')
  double v_min = 0.0;             ///< a2/β
  double v_max = 0.0;             ///< a2/α
  double p_min = 0.0;             ///< √α
  double p_max = 0.0;             ///< √β
};

enum class ConeKind { outer, inner };

ConeSpec make_cone(const BranchPotentials& pots, const EnergyBand& band);

bool in_cone(const SpaceTimePoint& pt, const ConeSpec& cone, ConeKind which);

/// p₀ = √(a2 x²/(t² - x²)), the wavenumber whose group line passes through (t, x).
double stationary_point(const SpaceTimePoint& pt, double a2);

/// φ(p, t, x) = √(a2 + p²) t - p x
double phase(double p, const SpaceTimePoint& pt, double a2);
double phase_derivative(double p, const SpaceTimePoint& pt, double a2);

double h1(const SpaceTimePoint& pt);

/// Channel amplitude at the stationary point,
///   √((a2-a1)v + a2) / (√((a2-a1)v + a2) + √a2)²,  v = (t/x)² - 1,
/// which equals p₀ q₁(a2+p₀²)/(c_q √a2).
double h2(const SpaceTimePoint& pt, const BranchPotentials& pots);

/// Leading coefficient of u₊ in the outer cone: u₊ = H t^{-1/2} + O(t^{-1}) with
///   H = 2c_q e^{iφ(p₀)} (2iπ)^{1/2} a2^{3/4} h₁ h₂ ψ̃(a2 + p₀²).
/// The factor 2c_q ties H to the library's normalization of q₁.
cplx coefficient_H(const SpaceTimePoint& pt, const SpectralProfile& profile, const BranchPotentials& pots,
                   double cq = kPlancherelConstant);

/// Unscaled modulus √(2π) a2^{3/4} h₁ h₂ |ψ̃(a2 + p₀²)|, the quantity bounded
/// by g and f·m. Equals |coefficient_H| / (2c_q).
double coefficient_modulus(const SpaceTimePoint& pt, const SpectralProfile& profile, const BranchPotentials& pots);

/// Upper bound g(a1, a2, β) on the unscaled modulus
/// √(2π) a2^{3/4} h₁ h₂ ‖ψ‖_∞ over the outer cone.
double bound_g(const BranchPotentials& pots, double beta);

/// Lower estimate f(a2, α, β), to be multiplied by m. h₁ enters through
/// (β/a2 + 1)^{3/4}, which is its maximum over the cone rather than its
/// minimum, so f·m can exceed the true infimum of the modulus.
double bound_f(const BranchPotentials& pots, const EnergyBand& band);

/// Large-a2 forms: √(2πβ) a2^{-1/4} and √(2πα) a2^{-1/4}.
double bound_g_asymptote(double a2, double beta);
double bound_f_asymptote(double a2, double alpha);

}  // namespace kgstar
