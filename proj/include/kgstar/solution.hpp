#pragma once

#include "kgstar/initial_data.hpp"
#include "kgstar/quadrature.hpp"
#include "kgstar/spectral_core.hpp"

namespace kgstar {

/// (t, x) with t >= 0 and x >= 0 a coordinate on the branch with potential a2.
struct SpaceTimePoint {
  double t = 0.0;
  double x = 0.0;
};

// Outgoing waves on branch 2 for initial data with (Vu₀)₂ ≡ 0 and (Vu₀)₁ = ψ̃,
// zero initial velocity:
//   u±(t, x) = ∫ e^{±i√λ t} q₁(λ) e^{-iξ₂(λ)x} ψ̃(λ) dλ   over [a2+α, a2+β].
// Every evaluation runs the phase-adaptive quadrature and throws
// QuadratureError when the tolerance is not met within the panel budget.

/// u₊ (sign = plus) or u₋ (sign = minus), λ-parametrization.
QuadResult u_signed(const SpaceTimePoint& pt, Sign sign, const SpectralProfile& profile,
                    const BranchPotentials& pots, const QuadratureConfig& quad,
                    double cq = kPlancherelConstant);

QuadResult u_plus(const SpaceTimePoint& pt, const SpectralProfile& profile, const BranchPotentials& pots,
                  const QuadratureConfig& quad, double cq = kPlancherelConstant);

QuadResult u_minus(const SpaceTimePoint& pt, const SpectralProfile& profile, const BranchPotentials& pots,
                   const QuadratureConfig& quad, double cq = kPlancherelConstant);

/// u₊ after substituting p = ξ₂(λ):
///   2 ∫_{√α}^{√β} e^{i√(a2+p²)t} q₁(a2+p²) e^{-ipx} ψ(p²) p dp.
QuadResult u_plus_pform(const SpaceTimePoint& pt, const SpectralProfile& profile,
                        const BranchPotentials& pots, const QuadratureConfig& quad,
                        double cq = kPlancherelConstant);

/// Solution on branch 2: ½(u₊ + u₋).
QuadResult u2(const SpaceTimePoint& pt, const SpectralProfile& profile, const BranchPotentials& pots,
              const QuadratureConfig& quad, double cq = kPlancherelConstant);

/// ∫ q₁|ψ̃| dλ, the trivial bound on |u±| everywhere.
double u_uniform_bound(const SpectralProfile& profile, const BranchPotentials& pots,
                       const QuadratureConfig& quad, double cq = kPlancherelConstant);

/// Throws std::invalid_argument unless profile.a2() matches pots.a2.
void check_profile_matches(const SpectralProfile& profile, const BranchPotentials& pots);

}  // namespace kgstar
