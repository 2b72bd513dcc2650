#include <cmath>
#include <numbers>

#include "doctest.h"
#include "kgstar/quadrature.hpp"

using namespace kgstar;

TEST_SUITE("quadrature") {
  TEST_CASE("gauss-legendre rule is exact for degree 2n-1") {
    for (int n : {4, 16, 32}) {
      const auto& gl = quad::gauss_legendre(n);
      REQUIRE(gl.nodes.size() == static_cast<std::size_t>(n));
      for (int deg = 0; deg <= 2 * n - 1; ++deg) {
        double sum = 0.0;
        for (int i = 0; i < n; ++i) sum += gl.weights[i] * std::pow(gl.nodes[i], deg);
        const double exact = deg % 2 ? 0.0 : 2.0 / (deg + 1);
        CHECK(sum == doctest::Approx(exact).epsilon(1e-13));
      }
      for (int i = 1; i < n; ++i) CHECK(gl.nodes[i] > gl.nodes[i - 1]);
    }
  }

  TEST_CASE("adaptive integral of smooth and kinked integrands") {
    QuadratureConfig cfg;
    cfg.abs_tol = 1e-13;
    cfg.rel_tol = 1e-12;
    auto r = quad::integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, cfg);
    CHECK(r.converged);
    CHECK(std::abs(r.value - 2.0) < 1e-12);

    const double bp[] = {0.3};
    auto k = quad::integrate([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0, cfg, bp);
    CHECK(k.converged);
    CHECK(std::abs(k.value - (0.045 + 0.245)) < 1e-13);

    auto rev = quad::integrate([](double x) { return x * x; }, 1.0, 0.0, cfg);
    CHECK(std::abs(rev.value + 1.0 / 3.0) < 1e-13);
  }

  TEST_CASE("oscillatory integral matches closed form") {
    QuadratureConfig cfg;
    cfg.abs_tol = 1e-12;
    cfg.rel_tol = 1e-10;
    const double w = 1e4;
    const cplx i(0.0, 1.0);
    auto r = quad::integrate_oscillatory([&](double x) { return std::exp(i * w * x); }, [&](double) { return w; },
                                         0.0, 1.0, cfg);
    const cplx exact = (std::exp(i * w) - 1.0) / (i * w);
    CHECK(r.converged);
    CHECK(std::abs(r.value - exact) < 1e-11);
  }

  TEST_CASE("budget exhaustion is reported") {
    QuadratureConfig cfg;
    cfg.max_panels = 4;
    cfg.abs_tol = 1e-14;
    cfg.rel_tol = 1e-14;
    auto r = quad::integrate([](double x) { return std::sqrt(std::abs(std::sin(50 * x))); }, 0.0, 10.0, cfg);
    CHECK_FALSE(r.converged);
    CHECK_THROWS_AS(quad::integrate_oscillatory([](double x) { return std::cos(1e6 * x); },
                                                [](double) { return 1e6; }, 0.0, 1.0, cfg),
                    QuadratureError);
  }

  TEST_CASE("configuration validation") {
    QuadratureConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.points_per_period = 4;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.abs_tol = 0.0;
    cfg.rel_tol = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  }
}
