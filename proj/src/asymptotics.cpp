#include "kgstar/asymptotics.hpp"

#include <cmath>
#include <numbers>

namespace kgstar {

namespace {

void require_inside_light_cone(const SpaceTimePoint& pt) {
  if (!(pt.x > 0.0)) throw std::invalid_argument("cone quantities need x > 0");
  if (!(pt.t > pt.x)) throw OutsideLightCone("point is not strictly inside the light cone t > x");
}

double slope_for(double a2, double edge) { return std::sqrt((a2 + edge) / edge); }

}  // namespace

ConeSpec make_cone(const BranchPotentials& pots, const EnergyBand& band) {
  pots.validate();
  band.validate();
  const double a2 = pots.a2;
  ConeSpec c;
  c.slope_low = slope_for(a2, band.beta);
  c.slope_high = slope_for(a2, band.alpha);
  c.inner_slope_low = slope_for(a2, band.beta_prime);
  c.inner_slope_high = slope_for(a2, band.alpha_prime);
  c.v_min = a2 / band.beta;
  c.v_max = a2 / band.alpha;
  c.p_min = std::sqrt(band.alpha);
  c.p_max = std::sqrt(band.beta);
  return c;
}

bool in_cone(const SpaceTimePoint& pt, const ConeSpec& cone, ConeKind which) {
  if (!(pt.x > 0.0)) throw std::invalid_argument("cone membership needs x > 0");
  const double r = pt.t / pt.x;
  if (which == ConeKind::outer) return cone.slope_low <= r && r <= cone.slope_high;
  return cone.inner_slope_low <= r && r <= cone.inner_slope_high;
}

double stationary_point(const SpaceTimePoint& pt, double a2) {
  if (pt.x < 0.0) throw std::invalid_argument("stationary point needs x >= 0");
  if (!(pt.t > pt.x)) throw OutsideLightCone("stationary point exists only for t > x");
  return pt.x * std::sqrt(a2) / std::sqrt((pt.t - pt.x) * (pt.t + pt.x));
}

double phase(double p, const SpaceTimePoint& pt, double a2) {
  return std::sqrt(a2 + p * p) * pt.t - p * pt.x;
}

double phase_derivative(double p, const SpaceTimePoint& pt, double a2) {
  return p * pt.t / std::sqrt(a2 + p * p) - pt.x;
}

double h1(const SpaceTimePoint& pt) {
  require_inside_light_cone(pt);
  const double r2 = (pt.t / pt.x) * (pt.t / pt.x);
  return std::pow(r2 / (r2 - 1.0), 0.75);
}

double h2(const SpaceTimePoint& pt, const BranchPotentials& pots) {
  require_inside_light_cone(pt);
  pots.validate();
  const double r = pt.t / pt.x;
  const double v = (r - 1.0) * (r + 1.0);
  const double b = std::sqrt((pots.a2 - pots.a1) * v + pots.a2);
  const double c = std::sqrt(pots.a2);
  return b / ((b + c) * (b + c));
}

cplx coefficient_H(const SpaceTimePoint& pt, const SpectralProfile& profile, const BranchPotentials& pots,
                   double cq) {
  require_inside_light_cone(pt);
  check_profile_matches(profile, pots);
  const double a2 = pots.a2;
  const double p0 = stationary_point(pt, a2);
  const double amp = profile.psi(p0 * p0);
  if (amp == 0.0) return {0.0, 0.0};
  const cplx root_2ipi = branch_sqrt(cplx(0.0, 2.0 * std::numbers::pi));
  const double modulus = 2.0 * cq * std::pow(a2, 0.75) * h1(pt) * h2(pt, pots) * amp;
  return std::polar(modulus, phase(p0, pt, a2)) * root_2ipi;
}

double coefficient_modulus(const SpaceTimePoint& pt, const SpectralProfile& profile, const BranchPotentials& pots) {
  require_inside_light_cone(pt);
  check_profile_matches(profile, pots);
  const double p0 = stationary_point(pt, pots.a2);
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(pots.a2, 0.75) * h1(pt) * h2(pt, pots) *
         std::abs(profile.psi(p0 * p0));
}

double bound_g(const BranchPotentials& pots, double beta) {
  pots.validate();
  const double a1 = pots.a1, a2 = pots.a2;
  return std::sqrt(2.0 * std::numbers::pi) * std::sqrt(beta) * std::pow(a2 + beta, 0.75) /
         (std::sqrt(a2) * std::sqrt(a2 - a1 + beta));
}

double bound_f(const BranchPotentials& pots, const EnergyBand& band) {
  pots.validate();
  band.validate();
  const double a1 = pots.a1, a2 = pots.a2;
  const double w = std::sqrt((a2 - a1) / band.alpha + 1.0);
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(a2, 0.75) * std::pow(band.beta / a2 + 1.0, 0.75) /
         std::sqrt(a2) * w / ((w + 1.0) * (w + 1.0));
}

double bound_g_asymptote(double a2, double beta) {
  return std::sqrt(2.0 * std::numbers::pi * beta) * std::pow(a2, -0.25);
}

double bound_f_asymptote(double a2, double alpha) {
  return std::sqrt(2.0 * std::numbers::pi * alpha) * std::pow(a2, -0.25);
}

}  // namespace kgstar
