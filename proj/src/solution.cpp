#include "kgstar/solution.hpp"

#include <array>
#include <cmath>
#include <string>

namespace kgstar {

void check_profile_matches(const SpectralProfile& profile, const BranchPotentials& pots) {
  pots.validate();
  if (std::abs(profile.a2() - pots.a2) > 1e-12 * std::max(1.0, pots.a2))
    throw std::invalid_argument("spectral profile was built for a2=" + std::to_string(profile.a2()) +
                                " but potentials have a2=" + std::to_string(pots.a2));
}

namespace {

void check_point(const SpaceTimePoint& pt) {
  if (!std::isfinite(pt.t) || !std::isfinite(pt.x) || pt.t < 0.0 || pt.x < 0.0)
    throw std::invalid_argument("space-time point must have finite t >= 0 and x >= 0");
}

QuadResult checked(const QuadResult& r, const char* what, double t) {
  if (!r.converged)
    throw QuadratureError(std::string(what) + ": tolerance not met (error estimate " +
                              std::to_string(r.error) + ")",
                          r.error, t);
  return r;
}

}  // namespace

QuadResult u_signed(const SpaceTimePoint& pt, Sign sign, const SpectralProfile& profile,
                    const BranchPotentials& pots, const QuadratureConfig& quad, double cq) {
  check_point(pt);
  check_profile_matches(profile, pots);
  quad.validate();
  if (profile.is_zero()) return {};
  const auto& b = profile.band();
  const double sg = to_double(sign);
  const double t = pt.t, x = pt.x, a2 = pots.a2;
  // integrate over μ = λ - a2 so that ξ₂ = √μ carries full precision
  auto integrand = [&](double mu) -> cplx {
    const double phase = sg * std::sqrt(a2 + mu) * t - std::sqrt(mu) * x;
    return std::polar(q1_above_threshold(mu, pots, cq) * profile.psi(mu), phase);
  };
  auto rate = [&](double mu) {
    return std::abs(sg * t / (2.0 * std::sqrt(a2 + mu)) - x / (2.0 * std::sqrt(mu)));
  };
  const std::array<double, 2> knots{b.alpha_prime, b.beta_prime};
  return checked(quad::integrate_oscillatory(integrand, rate, b.alpha, b.beta, quad, knots), "u_signed", t);
}

QuadResult u_plus(const SpaceTimePoint& pt, const SpectralProfile& profile, const BranchPotentials& pots,
                  const QuadratureConfig& quad, double cq) {
  return u_signed(pt, Sign::plus, profile, pots, quad, cq);
}

QuadResult u_minus(const SpaceTimePoint& pt, const SpectralProfile& profile, const BranchPotentials& pots,
                   const QuadratureConfig& quad, double cq) {
  return u_signed(pt, Sign::minus, profile, pots, quad, cq);
}

QuadResult u_plus_pform(const SpaceTimePoint& pt, const SpectralProfile& profile,
                        const BranchPotentials& pots, const QuadratureConfig& quad, double cq) {
  check_point(pt);
  check_profile_matches(profile, pots);
  quad.validate();
  if (profile.is_zero()) return {};
  const auto& b = profile.band();
  const double t = pt.t, x = pt.x, a2 = pots.a2;
  auto integrand = [&](double p) -> cplx {
    const double mu = p * p;
    const double phase = std::sqrt(a2 + mu) * t - p * x;
    return std::polar(2.0 * p * q1_above_threshold(mu, pots, cq) * profile.psi(mu), phase);
  };
  auto rate = [&](double p) { return std::abs(p * t / std::sqrt(a2 + p * p) - x); };
  const std::array<double, 2> knots{std::sqrt(b.alpha_prime), std::sqrt(b.beta_prime)};
  return checked(
      quad::integrate_oscillatory(integrand, rate, std::sqrt(b.alpha), std::sqrt(b.beta), quad, knots),
      "u_plus_pform", t);
}

QuadResult u2(const SpaceTimePoint& pt, const SpectralProfile& profile, const BranchPotentials& pots,
              const QuadratureConfig& quad, double cq) {
  const QuadResult up = u_plus(pt, profile, pots, quad, cq);
  const QuadResult um = u_minus(pt, profile, pots, quad, cq);
  return {0.5 * (up.value + um.value), 0.5 * (up.error + um.error), up.panels + um.panels, true};
}

double u_uniform_bound(const SpectralProfile& profile, const BranchPotentials& pots,
                       const QuadratureConfig& quad, double cq) {
  check_profile_matches(profile, pots);
  if (profile.is_zero()) return 0.0;
  const auto& b = profile.band();
  auto f = [&](double mu) { return q1_above_threshold(mu, pots, cq) * std::abs(profile.psi(mu)); };
  const std::array<double, 2> knots{b.alpha_prime, b.beta_prime};
  return quad::integrate(f, b.alpha, b.beta, quad, knots).value.real();
}

}  // namespace kgstar
