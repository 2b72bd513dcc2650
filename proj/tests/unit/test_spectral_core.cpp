#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "kgstar/spectral_core.hpp"

using namespace kgstar;

namespace {

const cplx I(0.0, 1.0);

bool close(cplx a, cplx b, double tol = 1e-14) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

cplx F(Sign sg, Branch j, Branch k, double x, double lambda, const BranchPotentials& pots) {
  return eigenfunction({sg, j, k, x}, lambda, pots);
}

}  // namespace

TEST_SUITE("spectral_core") {
  TEST_CASE("branch_sqrt convention") {
    CHECK(branch_sqrt(4.0) == cplx(2.0, 0.0));
    CHECK(branch_sqrt(-1.0) == cplx(0.0, -1.0));
    CHECK(close(branch_sqrt(cplx(0.0, 2.0)), cplx(1.0, 1.0)));
    CHECK(branch_sqrt(0.0) == cplx(0.0, 0.0));

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int n = 0; n < 2000; ++n) {
      const cplx z(u(rng), u(rng));
      const cplx r = branch_sqrt(z);
      CHECK(close(r * r, z, 1e-13));
      // arg in [-π, 0) under the convention, with the negative real axis at -π
      const bool lower_half = z.imag() < 0.0 || (z.imag() == 0.0 && z.real() < 0.0);
      CHECK((r.imag() < 0.0) == lower_half);
      if (z.imag() < 0.0) CHECK(r.imag() < 0.0);
      if (z.imag() > 0.0) CHECK(r.imag() > 0.0);
    }
  }

  TEST_CASE("xi and s examples") {
    const BranchPotentials p{0.0, 3.0};
    CHECK(xi(Branch::two, 3.0, p) == cplx(0.0, 0.0));
    CHECK(xi(Branch::two, 7.0, p) == cplx(2.0, 0.0));
    CHECK(xi(Branch::two, 2.0, p) == cplx(0.0, -1.0));
    CHECK(close(s(Branch::one, 4.0, p), -0.5));
    CHECK(close(s(Branch::two, 4.0, p), -2.0));
    const BranchPotentials sym{2.0, 2.0};
    CHECK(close(s(Branch::one, 5.3, sym), -1.0));
    CHECK_THROWS_AS(s(Branch::two, 3.0, p), BranchPointError);
    CHECK_THROWS_AS(s(Branch::one, 0.0, p), BranchPointError);
  }

  TEST_CASE("above the threshold xi are positive and s are reciprocal negatives") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int n = 0; n < 500; ++n) {
      const double a1 = 3.0 * u(rng), a2 = a1 + 5.0 * u(rng);
      const BranchPotentials p{a1, a2};
      const double lambda = a2 + 1e-6 + 20.0 * u(rng);
      const cplx x1 = xi(Branch::one, lambda, p), x2 = xi(Branch::two, lambda, p);
      CHECK(x1.imag() == 0.0);
      CHECK(x2.imag() == 0.0);
      CHECK(x1.real() > 0.0);
      CHECK(x2.real() > 0.0);
      const cplx s1 = s(Branch::one, lambda, p), s2 = s(Branch::two, lambda, p);
      CHECK(s1.real() < 0.0);
      CHECK(s2.real() < 0.0);
      CHECK(close(s1 * s2, 1.0, 1e-13));
    }
  }

  TEST_CASE("spectral weights") {
    const double cq = kPlancherelConstant;
    CHECK(cq == doctest::Approx(1.0 / std::numbers::pi));
    const BranchPotentials p{1.0, 2.0};
    CHECK(q(Branch::one, 0.5, p) == 0.0);
    CHECK(q(Branch::one, 1.0, p) == 0.0);
    CHECK(q(Branch::two, 2.0, p) == 0.0);
    const BranchPotentials sym{1.5, 1.5};
    CHECK(q(Branch::one, 5.5, sym) == doctest::Approx(cq * 0.125).epsilon(1e-15));
    CHECK(q(Branch::one, 4.0, {0.0, 3.0}) == doctest::Approx(cq * 2.0 / 9.0).epsilon(1e-15));
    CHECK(q(Branch::one, 4.0, {0.0, 3.0}, 1.0) == doctest::Approx(2.0 / 9.0).epsilon(1e-15));

    // nonnegative, continuous above a2, and the threshold form agrees with the direct one
    const BranchPotentials r{0.3, 2.7};
    double prev = q(Branch::one, r.a2 + 1e-9, r);
    for (int n = 1; n <= 4000; ++n) {
      const double lambda = r.a1 - 1.0 + 1e-3 * n;
      CHECK(q(Branch::one, lambda, r) >= 0.0);
      CHECK(q(Branch::two, lambda, r) >= 0.0);
      if (lambda > r.a2) {
        const double v = q(Branch::one, lambda, r);
        CHECK(std::abs(v - prev) < std::sqrt(1e-3));  // square-root onset at a2
        CHECK(q1_above_threshold(lambda - r.a2, r) == doctest::Approx(v).epsilon(1e-12));
        prev = v;
      }
    }
  }

  TEST_CASE("eigenfunction examples") {
    const BranchPotentials p{0.0, 1.0};
    CHECK(close(F(Sign::minus, Branch::one, Branch::two, 0.0, 3.0, p), 1.0));
    const BranchPotentials sym{1.0, 1.0};
    for (double x : {0.0, 0.7, 13.0}) {
      const double lam = 3.25, k = std::sqrt(lam - 1.0);
      CHECK(close(F(Sign::minus, Branch::one, Branch::one, x, lam, sym), std::exp(I * k * x), 1e-13));
    }
    // below a2 the minus family decays on branch 2
    CHECK(close(F(Sign::minus, Branch::one, Branch::two, 3.0, 0.0, p), std::exp(-3.0), 1e-14));
    CHECK(close(F(Sign::plus, Branch::one, Branch::two, 3.0, 0.0, p), std::exp(3.0), 1e-14));
    CHECK_THROWS_AS(F(Sign::minus, Branch::one, Branch::one, -1.0, 3.0, p), std::invalid_argument);
  }

  TEST_CASE("vertex conditions hold to second order") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int n = 0; n < 50; ++n) {
      const double a1 = 2.0 * u(rng), a2 = a1 + 3.0 * u(rng);
      const BranchPotentials p{a1, a2};
      const double lam = a2 + 0.05 + 6.0 * u(rng);
      for (Sign sg : {Sign::minus, Sign::plus})
        for (Branch j : {Branch::one, Branch::two}) {
          CHECK(close(F(sg, j, Branch::one, 0.0, lam, p), F(sg, j, Branch::two, 0.0, lam, p), 1e-14));
          // one-sided second-order derivative sum at the vertex
          auto flux = [&](double h) {
            cplx sum = 0.0;
            for (Branch k : {Branch::one, Branch::two})
              sum += (-3.0 * F(sg, j, k, 0.0, lam, p) + 4.0 * F(sg, j, k, h, lam, p) - F(sg, j, k, 2 * h, lam, p)) /
                     (2.0 * h);
            return std::abs(sum);
          };
          // the h² coefficient is proportional to a2 - a1, so only a lower bound on the rate is universal
          const double e1 = flux(1e-2), e2 = flux(5e-3);
          CHECK(e1 < 1e-2);
          CHECK((e1 / e2 > 3.9 || e2 < 1e-11));
        }
    }
  }

  TEST_CASE("eigenfunctions solve the branch equation") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int n = 0; n < 50; ++n) {
      const double a1 = 2.0 * u(rng), a2 = a1 + 3.0 * u(rng);
      const BranchPotentials p{a1, a2};
      const double lam = a1 + 0.05 + 8.0 * u(rng);  // covers a1 < λ < a2 as well
      const double x = 0.5 + 10.0 * u(rng);
      for (Branch j : {Branch::one, Branch::two})
        for (Branch k : {Branch::one, Branch::two}) {
          const double ak = k == Branch::one ? a1 : a2;
          auto residual = [&](double h) {
            const cplx f0 = F(Sign::minus, j, k, x, lam, p);
            const cplx d2 =
                (F(Sign::minus, j, k, x + h, lam, p) - 2.0 * f0 + F(Sign::minus, j, k, x - h, lam, p)) / (h * h);
            return std::abs(-d2 + ak * f0 - lam * f0);
          };
          const double r1 = residual(2e-2), r2 = residual(1e-2);
          CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.05));
        }
    }
  }
}
