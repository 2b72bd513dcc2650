#include "kgstar/quadrature.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace kgstar {

void QuadratureConfig::validate() const {
  if (!(abs_tol > 0) || !(rel_tol > 0))
    throw std::invalid_argument("quadrature tolerances must be positive");
  if (max_panels < 1) throw std::invalid_argument("max_panels must be positive");
  if (points_per_period < 8) throw std::invalid_argument("points_per_period must be >= 8");
}

namespace quad {

namespace {

GaussLegendre build_rule(int n) {
  GaussLegendre rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace

const GaussLegendre& gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("Gauss-Legendre order must be positive");
  static std::mutex mu;
  static std::map<int, std::unique_ptr<GaussLegendre>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<GaussLegendre>(build_rule(n));
  return *slot;
}

}  // namespace quad
}  // namespace kgstar
