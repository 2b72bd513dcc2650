#pragma once

#include <utility>

namespace kgstar {

/// Band edges measured from the threshold a2: 0 < α < α' < β' < β < 1.
/// `m` is the plateau floor required on [α', β'].
struct EnergyBand {
  double alpha = 0.25;
  double alpha_prime = 0.375;
  double beta_prime = 0.625;
  double beta = 0.75;
  double m = 1.0;

  void validate() const;
};

enum class ProfileShape {
  plateau,        ///< quintic smoothstep ramps with a flat top
  raised_cosine,  ///< squared raised cosine over (α, β), no plateau
  zero,           ///< identically zero; used for degenerate runs
};

/// Quintic C² smoothstep 6s⁵ - 15s⁴ + 10s³ on [0, 1], clamped outside.
double smoothstep5(double s);

/// The shape ψ(μ) on (α, β) and its shift ψ̃(λ) = ψ(λ - a2).
class SpectralProfile {
 public:
  SpectralProfile(const EnergyBand& band, double a2, ProfileShape shape = ProfileShape::plateau);

  double psi(double mu) const;
  double psi_tilde(double lambda) const { return psi(lambda - a2_); }

  const EnergyBand& band() const { return band_; }
  double a2() const { return a2_; }
  ProfileShape shape() const { return shape_; }
  bool is_zero() const { return shape_ == ProfileShape::zero; }

  /// Minimum of ψ on [α', β'] (1 for the plateau, 0 for the zero profile).
  double plateau_floor() const;
  /// ‖ψ‖_{L²((α, β))}.
  double l2_norm() const;
  /// Same profile shifted to a different threshold.
  SpectralProfile with_a2(double a2) const { return SpectralProfile(band_, a2, shape_); }

 private:
  EnergyBand band_;
  double a2_;
  ProfileShape shape_;
};

/// Default C² plateau profile for the band.
SpectralProfile make_bump(const EnergyBand& band, double a2 = 0.0);

/// (λ_min, λ_max) = (a2 + α, a2 + β).
std::pair<double, double> band_support(const SpectralProfile& profile, double a2);

}  // namespace kgstar
