#include "kgstar/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kgstar {

void EnergyBand::validate() const {
  if (!(0.0 < alpha && alpha < alpha_prime && alpha_prime < beta_prime && beta_prime < beta && beta < 1.0))
    throw std::invalid_argument("energy band must satisfy 0 < alpha < alpha' < beta' < beta < 1");
  if (!(m > 0.0 && m <= 1.0)) throw std::invalid_argument("plateau floor m must lie in (0, 1]");
}

double smoothstep5(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  return s * s * s * (s * (6.0 * s - 15.0) + 10.0);
}

SpectralProfile::SpectralProfile(const EnergyBand& band, double a2, ProfileShape shape)
    : band_(band), a2_(a2), shape_(shape) {
  band_.validate();
  if (!std::isfinite(a2) || a2 < 0.0) throw std::invalid_argument("profile threshold a2 must be finite and >= 0");
}

double SpectralProfile::psi(double mu) const {
  const auto& b = band_;
  if (shape_ == ProfileShape::zero || mu <= b.alpha || mu >= b.beta) return 0.0;
  if (shape_ == ProfileShape::raised_cosine) {
    const double c = std::cos(std::numbers::pi * (mu - 0.5 * (b.alpha + b.beta)) / (b.beta - b.alpha));
    return c * c * c * c;
  }
  if (mu < b.alpha_prime) return smoothstep5((mu - b.alpha) / (b.alpha_prime - b.alpha));
  if (mu > b.beta_prime) return smoothstep5((b.beta - mu) / (b.beta - b.beta_prime));
  return 1.0;
}

double SpectralProfile::plateau_floor() const {
  switch (shape_) {
    case ProfileShape::plateau: return 1.0;
    case ProfileShape::raised_cosine: return std::min(psi(band_.alpha_prime), psi(band_.beta_prime));
    case ProfileShape::zero: return 0.0;
  }
  return 0.0;
}

double SpectralProfile::l2_norm() const {
  const auto& b = band_;
  switch (shape_) {
    case ProfileShape::plateau: {
      constexpr double ramp_sq = 181.0 / 462.0;  // ∫₀¹ S(s)² ds
      const double ramps = (b.alpha_prime - b.alpha) + (b.beta - b.beta_prime);
      return std::sqrt((b.beta_prime - b.alpha_prime) + ramps * ramp_sq);
    }
    case ProfileShape::raised_cosine: return std::sqrt(35.0 * (b.beta - b.alpha) / 128.0);
    case ProfileShape::zero: return 0.0;
  }
  return 0.0;
}

SpectralProfile make_bump(const EnergyBand& band, double a2) {
  return SpectralProfile(band, a2, ProfileShape::plateau);
}

std::pair<double, double> band_support(const SpectralProfile& profile, double a2) {
  return {a2 + profile.band().alpha, a2 + profile.band().beta};
}

}  // namespace kgstar
