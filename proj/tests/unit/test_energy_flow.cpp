#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "kgstar/asymptotics.hpp"
#include "kgstar/energy_flow.hpp"
#include "kgstar/quadrature.hpp"
#include "kgstar/transform.hpp"

using namespace kgstar;

namespace {

// Parseval limit of ‖u₊(t,·)‖ on the whole line: u₊ = ∫ A(p) e^{i√(a2+p²)t} e^{-ipx} dp
// with A = 2p q₁(a2+p²) ψ(p²), so ‖u₊‖² = 2π ∫ |A|² dp for every t.
double parseval_norm(const SpectralProfile& prof, const BranchPotentials& pots) {
  const auto& b = prof.band();
  const double knots[] = {std::sqrt(b.alpha), std::sqrt(b.alpha_prime), std::sqrt(b.beta_prime), std::sqrt(b.beta)};
  const auto& gl = quad::gauss_legendre(20);
  double sum = 0.0;
  for (int i = 0; i < 3; ++i) {
    const int panels = 40;
    const double h = (knots[i + 1] - knots[i]) / panels;
    for (int pnl = 0; pnl < panels; ++pnl)
      for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
        const double p = knots[i] + (pnl + 0.5 + 0.5 * gl.nodes[j]) * h;
        const double a = 2.0 * p * q(Branch::one, pots.a2 + p * p, pots) * prof.psi(p * p);
        sum += 0.5 * h * gl.weights[j] * a * a;
      }
  }
  return std::sqrt(2.0 * std::numbers::pi * sum);
}

}  // namespace

TEST_SUITE("energy_flow") {
  TEST_CASE("cone interval") {
    const EnergyBand b;
    for (double a2 : {0.1, 1.0, 100.0}) {
      const auto ci = cone_interval(50.0, b, a2);
      CHECK(ci.x_low > 0.0);
      CHECK(ci.x_low < ci.x_high);
      CHECK(ci.x_high < 50.0);
      CHECK(ci.x_low == doctest::Approx(50.0 * std::sqrt(b.alpha_prime / (a2 + b.alpha_prime))));
    }
  }

  TEST_CASE("zero profile has zero norms") {
    const BranchPotentials p{0.0, 1.0};
    const SpectralProfile z(EnergyBand{}, p.a2, ProfileShape::zero);
    CHECK(l2_branch(10.0, z, p, {}).norm == 0.0);
    CHECK(l2_cone(10.0, z, p, {}).norm == 0.0);
  }

  TEST_CASE("branch norm approaches the Parseval limit") {
    const BranchPotentials p{0.0, 1.0};
    const auto prof = make_bump(EnergyBand{}, p.a2);
    const BranchNorm n = l2_branch(1e3, prof, p, {});
    CHECK(n.norm == doctest::Approx(parseval_norm(prof, p)).epsilon(1e-5));
    CHECK(n.norm <= n.plancherel_bound);
  }

  TEST_CASE("branch norm at time zero equals the initial data norm") {
    const BranchPotentials p{0.0, 1.0};
    const auto prof = make_bump(EnergyBand{}, p.a2);
    const BranchNorm n = l2_branch(0.0, prof, p, {});
    const InitialDataSynthesis syn(prof, p, n.x_cut);
    QuadratureConfig q;
    q.abs_tol = 1e-14;
    q.rel_tol = 1e-10;
    const auto r = quad::integrate([&](double x) { return std::norm(syn(Branch::two, x)); }, 0.0, n.x_cut, q);
    CHECK(n.norm == doctest::Approx(std::sqrt(r.value.real())).epsilon(1e-6));
  }

  TEST_CASE("norms obey the subinterval and Plancherel bounds") {
    for (double a2 : {1.0, 10.0, 100.0}) {
      const BranchPotentials p{0.0, a2};
      const auto prof = make_bump(EnergyBand{}, a2);
      for (double t : {10.0, 100.0}) {
        const BranchNorm nb = l2_branch(t, prof, p, {});
        const ConeNorm nc = l2_cone(t, prof, p, {});
        CHECK(nc.norm <= nb.norm);
        CHECK(nb.norm <= nb.plancherel_bound + 1e-6);
      }
    }
  }

  TEST_CASE("closed-form displays and their large-a2 limits") {
    const EnergyBand b;
    const auto prof = make_bump(b, 0.0);
    const double big = 1e8;
    const BranchPotentials pb{0.0, big};
    CHECK(plancherel_bound(prof.with_a2(big), pb) / plancherel_bound_asymptote(prof, big) ==
          doctest::Approx(1.0).epsilon(1e-8));
    CHECK(cone_upper_display(bound_g(pb, b.beta), 0.0, b, big) / cone_upper_asymptote(b, big) ==
          doctest::Approx(1.0).epsilon(1e-3));
    CHECK(ratio_bound(prof.with_a2(big), pb) / ratio_bound_asymptote(prof) == doctest::Approx(1.0).epsilon(1e-2));
    // the branch bound uses √(a2 - a1 + α), which stays real for a1 <= a2
    const BranchPotentials p{0.7, 1.2};
    const double expect =
        std::sqrt(b.beta) / (std::sqrt(p.a2 - p.a1 + b.alpha) * std::pow(b.alpha, 0.25)) * prof.l2_norm();
    CHECK(plancherel_bound(prof.with_a2(p.a2), p) == doctest::Approx(expect).epsilon(1e-15));
    CHECK(std::isfinite(ratio_bound(prof.with_a2(p.a2), p)));
    CHECK(cone_lower_display(1.0, 2.0, b, 1.0) == 0.0);
  }

  TEST_CASE("ratio report cells") {
    const std::vector<double> ts{50.0, 100.0}, a2s{1.0};
    const auto rows = ratio_report(ts, a2s, EnergyBand{}, {});
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows) {
      CHECK_FALSE(r.failed);
      CHECK(r.ratio >= 1.0);
      CHECK(r.norm_cone > 0.0);
      CHECK(r.margin_branch() == doctest::Approx(r.bound_upper_branch - r.norm_branch));
    }
    CHECK(rows[0].t == 50.0);
    CHECK(rows[1].t == 100.0);

    QuadratureConfig starved;
    starved.max_panels = 3;
    const auto bad = ratio_report(ts, a2s, EnergyBand{}, starved);
    for (const auto& r : bad) {
      CHECK(r.failed);
      CHECK_FALSE(r.error.empty());
    }

    std::ostringstream os;
    write_csv(os, rows);
    std::istringstream is(os.str());
    std::string header, line;
    std::getline(is, header);
    CHECK(std::count(header.begin(), header.end(), ',') == 15);
    int n = 0;
    while (std::getline(is, line)) {
      CHECK(std::count(line.begin(), line.end(), ',') == 15);
      ++n;
    }
    CHECK(n == 2);
  }

  TEST_CASE("truncation failure is reported") {
    const BranchPotentials p{0.0, 1.0};
    const auto prof = make_bump(EnergyBand{}, p.a2);
    NormOptions opts;
    opts.tail_tol = 1e-300;
    opts.max_doublings = 1;
    CHECK_THROWS_AS(l2_branch(1.0, prof, p, {}, kPlancherelConstant, opts), TruncationError);
  }

  TEST_CASE("power-law fits") {
    std::vector<std::pair<double, double>> s;
    for (double t = 100.0; t <= 1e4; t *= 1.5) s.emplace_back(t, 7.0 / std::sqrt(t));
    const auto f = decay_fit(s);
    CHECK(f.slope == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(std::exp(f.intercept) == doctest::Approx(7.0).epsilon(1e-12));
    CHECK(f.residual < 1e-12);
    for (auto& v : s) v.second = 3.0;
    CHECK(std::abs(decay_fit(s).slope) < 1e-14);
    const std::vector<std::pair<double, double>> few{{1, 1}, {2, 2}};
    CHECK_THROWS_AS(decay_fit(few), std::invalid_argument);
    const std::vector<std::pair<double, double>> flat{{2, 1}, {2, 2}, {2, 3}};
    CHECK_THROWS_AS(decay_fit(flat), std::invalid_argument);
    const std::vector<std::pair<double, double>> neg{{1, 1}, {2, -2}, {3, 3}};
    CHECK_THROWS_AS(decay_fit(neg), std::invalid_argument);
  }

  TEST_CASE("threshold time location") {
    std::vector<EnergyReport> rows(5);
    const double ratios[] = {3.0, 1.0, 2.5, 1.0, 1.0};
    for (int i = 0; i < 5; ++i) {
      rows[i].t = 10.0 * (i + 1);
      rows[i].ratio = ratios[i];
    }
    auto ok = [](const EnergyReport& r) { return r.ratio < 2.0; };
    CHECK(locate_t0(std::span<const EnergyReport>(rows), ok) == 40.0);
    rows[4].failed = true;
    CHECK_FALSE(locate_t0(std::span<const EnergyReport>(rows), ok).has_value());
  }
}
