#include <cmath>
#include <random>

#include "doctest.h"
#include "kgstar/quadrature.hpp"
#include "kgstar/solution.hpp"
#include "kgstar/transform.hpp"

using namespace kgstar;

namespace {

const BranchPotentials kPots{0.0, 1.0};

SpectralProfile bump(double a2 = kPots.a2) { return make_bump(EnergyBand{}, a2); }

// Random points with t <= 1e4, half of them near the group lines of the band.
std::vector<SpaceTimePoint> sample_points(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<SpaceTimePoint> pts;
  for (int i = 0; i < n; ++i) {
    const double t = std::pow(10.0, 4.0 * u(rng));
    const double x = i % 2 ? t * u(rng) : t / (1.5 + 1.0 * u(rng));
    pts.push_back({t, x});
  }
  return pts;
}

}  // namespace

TEST_SUITE("solution") {
  TEST_CASE("zero profile gives zero") {
    const SpectralProfile z(EnergyBand{}, kPots.a2, ProfileShape::zero);
    CHECK(u_plus({10.0, 3.0}, z, kPots, {}).value == cplx{});
    CHECK(u2({10.0, 3.0}, z, kPots, {}).value == cplx{});
    CHECK(u_uniform_bound(z, kPots, {}) == 0.0);
  }

  TEST_CASE("value at the origin is the plain profile integral") {
    const auto prof = bump();
    QuadratureConfig q;
    q.abs_tol = 1e-14;
    q.rel_tol = 1e-13;
    const cplx v = u_plus({0.0, 0.0}, prof, kPots, q).value;
    // composite Simpson over λ on the three smooth pieces
    const auto& b = prof.band();
    const double knots[] = {b.alpha, b.alpha_prime, b.beta_prime, b.beta};
    double oracle = 0.0;
    for (int i = 0; i < 3; ++i) {
      const int n = 4000;
      const double h = (knots[i + 1] - knots[i]) / n;
      auto f = [&](double mu) { return kgstar::q(Branch::one, kPots.a2 + mu, kPots) * prof.psi(mu); };
      double s = f(knots[i]) + f(knots[i + 1]);
      for (int j = 1; j < n; ++j) s += (j % 2 ? 4.0 : 2.0) * f(knots[i] + j * h);
      oracle += s * h / 3.0;
    }
    CHECK(v.real() > 0.0);
    CHECK(std::abs(v.imag()) < 1e-16);
    CHECK(v.real() == doctest::Approx(oracle).epsilon(1e-11));
    CHECK(u_uniform_bound(prof, kPots, q) == doctest::Approx(oracle).epsilon(1e-11));
  }

  TEST_CASE("lambda and wavenumber parametrizations agree") {
    const auto prof = bump();
    const QuadratureConfig q;
    const cplx a = u_plus({50.0, 20.0}, prof, kPots, q).value;
    const cplx b = u_plus_pform({50.0, 20.0}, prof, kPots, q).value;
    CHECK(std::abs(a - b) <= 1e-8 * std::abs(a));
    for (const auto& pt : sample_points(40, 17)) {
      const cplx l = u_plus(pt, prof, kPots, q).value;
      const cplx p = u_plus_pform(pt, prof, kPots, q).value;
      CHECK(std::abs(l - p) <= 1e-8 * std::max(1.0, std::abs(l)));
    }
  }

  TEST_CASE("time reversal symmetry and the uniform bound") {
    // u₋ is the conjugate of the plus-family integral with the spatial wave mirrored,
    // not of u₊ itself: e^{-iξ₂x} is not conjugated. Checked against a direct rule.
    const BranchPotentials pots{0.4, 3.0};
    const auto prof = SpectralProfile(EnergyBand{0.1, 0.3, 0.5, 0.9}, pots.a2, ProfileShape::raised_cosine);
    const QuadratureConfig q;
    const double bound = u_uniform_bound(prof, pots, q);
    const auto& b = prof.band();
    const auto& gl = quad::gauss_legendre(20);
    for (const auto& pt : sample_points(30, 23)) {
      const QuadResult up = u_plus(pt, prof, pots, q), um = u_minus(pt, prof, pots, q);
      cplx mirrored = 0.0;
      const double lo = std::sqrt(b.alpha), hi = std::sqrt(b.beta);
      const int panels = 200 + static_cast<int>((pt.t + pt.x) / 4.0);
      const double h = (hi - lo) / panels;
      for (int k = 0; k < panels; ++k)
        for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
          const double p = lo + (k + 0.5 + 0.5 * gl.nodes[j]) * h;
          const double amp = 2.0 * p * kgstar::q(Branch::one, pots.a2 + p * p, pots) * prof.psi(p * p);
          mirrored += 0.5 * h * gl.weights[j] * std::polar(amp, std::sqrt(pots.a2 + p * p) * pt.t + p * pt.x);
        }
      CHECK(std::abs(um.value - std::conj(mirrored)) <= um.error + 1e-12 * bound);
      CHECK(std::abs(up.value) <= bound * (1.0 + 1e-12));
      CHECK(std::abs(um.value) <= bound * (1.0 + 1e-12));
    }
    for (double x : {0.0, 2.0, 30.0}) {
      const cplx a = u2({0.0, x}, prof, pots, q).value;
      CHECK(std::abs(a - u_plus({0.0, x}, prof, pots, q).value) < 1e-14);
      CHECK(std::abs(a - u_minus({0.0, x}, prof, pots, q).value) < 1e-14);
    }
  }

  TEST_CASE("time zero reproduces the reconstructed initial data") {
    const BranchPotentials pots{0.2, 2.0};
    const auto prof = bump(pots.a2);
    QuadratureConfig q;
    q.abs_tol = 1e-13;
    for (double x : {0.0, 0.8, 12.0, 300.0}) {
      const cplx sol = u2({0.0, x}, prof, pots, q).value;
      CHECK(std::abs(sol - reconstruct_at(Branch::two, x, prof, pots, q)) < 1e-12);
    }
  }

  TEST_CASE("doubling the oscillation resolution stays within the error estimate") {
    const auto prof = bump();
    QuadratureConfig coarse;
    QuadratureConfig fine = coarse;
    fine.points_per_period *= 2;
    const double bound = u_uniform_bound(prof, kPots, coarse);
    for (const auto& pt : sample_points(20, 31)) {
      const QuadResult a = u_plus(pt, prof, kPots, coarse), b = u_plus(pt, prof, kPots, fine);
      CHECK(std::abs(a.value - b.value) <= a.error + b.error + 1e-14 * bound);
    }
  }

  TEST_CASE("invalid input and exhausted budgets") {
    const auto prof = bump();
    CHECK_THROWS_AS(u_plus({-1.0, 0.0}, prof, kPots, {}), std::invalid_argument);
    CHECK_THROWS_AS(u_plus({1.0, -1.0}, prof, kPots, {}), std::invalid_argument);
    CHECK_THROWS_AS(u_plus({1.0, 1.0}, bump(2.0), kPots, {}), std::invalid_argument);
    QuadratureConfig starved;
    starved.max_panels = 10;
    CHECK_THROWS_AS(u_plus({1e5, 3e4}, prof, kPots, starved), QuadratureError);
  }
}
