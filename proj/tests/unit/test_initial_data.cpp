#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "kgstar/initial_data.hpp"

using namespace kgstar;

namespace {

// Composite Simpson on [a, b] with n (even) intervals.
template <class F>
double simpson(F f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

}  // namespace

TEST_SUITE("initial_data") {
  TEST_CASE("band validation") {
    CHECK_NOTHROW(EnergyBand{}.validate());
    CHECK_THROWS_AS((EnergyBand{0.3, 0.2, 0.5, 0.6}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((EnergyBand{0.0, 0.2, 0.5, 0.6}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((EnergyBand{0.1, 0.2, 0.5, 1.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((EnergyBand{0.1, 0.2, 0.5, 0.6, 0.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS(make_bump(EnergyBand{0.1, 0.5, 0.5, 0.6}), std::invalid_argument);
    CHECK_THROWS_AS(SpectralProfile(EnergyBand{}, -1.0), std::invalid_argument);
  }

  TEST_CASE("plateau bump values") {
    const EnergyBand b;
    const auto p = make_bump(b);
    CHECK(p.psi(b.alpha) == 0.0);
    CHECK(p.psi(0.5 * (b.alpha_prime + b.beta_prime)) == 1.0);
    CHECK(p.psi(b.beta) == 0.0);
    CHECK(p.psi(0.5 * (b.alpha + b.alpha_prime)) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(smoothstep5(0.5) == 0.5);
    CHECK(p.plateau_floor() == 1.0);
    for (int i = 0; i <= 1000; ++i) {
      const double mu = -0.1 + 1.2e-3 * i;
      const double v = p.psi(mu);
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      if (mu >= b.alpha_prime && mu <= b.beta_prime) CHECK(v == 1.0);
    }
  }

  TEST_CASE("profile is twice continuously differentiable") {
    const EnergyBand b;
    for (auto shape : {ProfileShape::plateau, ProfileShape::raised_cosine}) {
      const SpectralProfile p(b, 0.0, shape);
      auto d2 = [&](double mu, double h) { return (p.psi(mu + h) - 2.0 * p.psi(mu) + p.psi(mu - h)) / (h * h); };
      for (double knot : {b.alpha, b.alpha_prime, b.beta_prime, b.beta}) {
        // one-sided second differences on either side of the knot; the jump must shrink with h
        auto jump = [&](double h) { return std::abs(d2(knot - 2 * h, h) - d2(knot + 2 * h, h)); };
        CHECK(jump(1e-4) <= 0.15 * jump(1e-3) + 1e-6);
      }
    }
  }

  TEST_CASE("shift invariance and support") {
    const EnergyBand b;
    const auto p0 = make_bump(b, 0.0);
    const auto p7 = p0.with_a2(7.0);
    for (int i = 0; i <= 100; ++i) {
      const double mu = 0.01 * i;
      // equal up to the rounding of (7 + μ) - 7
      CHECK(std::abs(p7.psi_tilde(7.0 + mu) - p0.psi(mu)) < 1e-13);
      CHECK(p7.psi_tilde(7.0 + mu) == p7.psi((7.0 + mu) - 7.0));
    }
    const auto s1 = band_support(p0, 1.0);
    CHECK(s1.first == 1.25);
    CHECK(s1.second == 1.75);
    const auto s100 = band_support(p0, 100.0);
    CHECK(s100.first == 100.25);
    CHECK(s100.second == 100.75);
    CHECK(band_support(p0, 0.0).first > 0.0);
  }

  TEST_CASE("closed-form L2 norms match quadrature") {
    const EnergyBand b{0.1, 0.3, 0.45, 0.8};
    for (auto shape : {ProfileShape::plateau, ProfileShape::raised_cosine}) {
      const SpectralProfile p(b, 0.0, shape);
      double sum = 0.0;
      const double knots[] = {b.alpha, b.alpha_prime, b.beta_prime, b.beta};
      for (int i = 0; i < 3; ++i)
        sum += simpson([&](double mu) { return p.psi(mu) * p.psi(mu); }, knots[i], knots[i + 1], 2000);
      CHECK(p.l2_norm() == doctest::Approx(std::sqrt(sum)).epsilon(1e-12));
    }
    const SpectralProfile z(b, 0.0, ProfileShape::zero);
    CHECK(z.is_zero());
    CHECK(z.psi(0.5) == 0.0);
    CHECK(z.l2_norm() == 0.0);
    CHECK(z.plateau_floor() == 0.0);
    const SpectralProfile rc(b, 0.0, ProfileShape::raised_cosine);
    CHECK(rc.plateau_floor() > 0.0);
    CHECK(rc.plateau_floor() < 1.0);
  }
}
