#include "kgstar/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <random>

#include "kgstar/parallel.hpp"
#include "kgstar/solution.hpp"

namespace kgstar {

std::vector<double> log_grid(double lo, double hi, int n) {
  if (n < 2 || !(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("log_grid needs n >= 2 and 0 < lo < hi");
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  out.back() = hi;
  return out;
}

// ---------------------------------------------------------------- transform

namespace {

struct GaussianPacket {
  cplx amp;
  double centre, width, wavenumber;
  cplx operator()(double x) const {
    const double z = (x - centre) / width;
    return amp * std::exp(-0.5 * z * z) * std::polar(1.0, wavenumber * x);
  }
};

}  // namespace

PlancherelSuite run_plancherel(int count, std::uint64_t seed, const QuadratureConfig& quad, double cq, int jobs) {
  if (count < 1) throw std::invalid_argument("run_plancherel needs count >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  struct Draw {
    BranchPotentials pots;
    GaussianPacket f1, f2;
  };
  std::vector<Draw> draws(count);
  for (auto& d : draws) {
    d.pots.a1 = 2.0 * u01(rng);
    d.pots.a2 = d.pots.a1 + 3.0 * u01(rng);
    for (GaussianPacket* g : {&d.f1, &d.f2}) {
      g->amp = {2.0 * u01(rng) - 1.0, 2.0 * u01(rng) - 1.0};
      g->width = 0.8 + 1.7 * u01(rng);
      // nine widths clear of the vertex, so the cut at x = 0 is below rounding
      g->centre = 9.0 * g->width + 5.0 * u01(rng);
      g->wavenumber = 4.0 * u01(rng) - 2.0;
    }
  }
  PlancherelSuite suite;
  suite.cases.resize(count);
  parallel_for(draws.size(), jobs, [&](std::size_t i) {
    const Draw& d = draws[i];
    BranchFunction f{d.f1, d.f2,
                     std::max(d.f1.centre + 9.0 * d.f1.width, d.f2.centre + 9.0 * d.f2.width)};
    const double kmax = std::max(std::abs(d.f1.wavenumber), std::abs(d.f2.wavenumber));
    const double wmin = std::min(d.f1.width, d.f2.width);
    const double reach = kmax + 9.0 / wmin;
    const double lambda_max = d.pots.a2 + reach * reach;
    const SpectralPair g = forward_transform_callable(f, lambda_max, d.pots, quad);
    PlancherelCase& c = suite.cases[i];
    c.pots = d.pots;
    c.h_norm = h_norm(f, quad);
    c.q_norm = q_norm(g, d.pots, quad, cq);
    const double unit = q_norm(g, d.pots, quad, 1.0);
    c.unit_ratio = unit * unit / (c.h_norm * c.h_norm);
    c.rel_dev = std::abs(c.q_norm - c.h_norm) / c.h_norm;
  });
  double sum = 0.0;
  for (const auto& c : suite.cases) {
    suite.max_rel_dev = std::max(suite.max_rel_dev, c.rel_dev);
    sum += c.unit_ratio;
  }
  suite.measured_constant = sum / count;
  suite.calibrated_cq = 1.0 / suite.measured_constant;
  return suite;
}

std::vector<EnergyBand> round_trip_bands() {
  return {{0.25, 0.375, 0.625, 0.75, 1.0},
          {0.1, 0.2, 0.4, 0.5, 1.0},
          {0.3, 0.45, 0.75, 0.9, 1.0},
          {0.15, 0.3, 0.5, 0.65, 1.0},
          {0.4, 0.5, 0.7, 0.85, 1.0}};
}

std::vector<BranchPotentials> round_trip_potentials() { return {{0.0, 1.0}, {0.5, 2.0}, {0.0, 3.0}}; }

std::vector<RoundTripCase> run_round_trips(std::span<const EnergyBand> bands, std::span<const BranchPotentials> pots,
                                           ProfileShape shape, const QuadratureConfig& quad, double cq, int jobs) {
  std::vector<RoundTripCase> out(bands.size() * pots.size());
  parallel_for(out.size(), jobs, [&](std::size_t i) {
    RoundTripCase& c = out[i];
    c.band = bands[i / pots.size()];
    c.pots = pots[i % pots.size()];
    const SpectralProfile profile(c.band, c.pots.a2, shape);
    c.report = round_trip(profile, c.pots, quad, cq);
  });
  return out;
}

// ---------------------------------------------------------------- decay and remainder

std::vector<double> inner_rays(const ConeSpec& cone, int n) {
  if (n < 1) throw std::invalid_argument("inner_rays needs n >= 1");
  std::vector<double> out(n);
  const double lo = cone.inner_slope_low, hi = cone.inner_slope_high;
  for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * (i + 1.0) / (n + 1.0);
  return out;
}

std::vector<RayResult> run_decay(const SpectralProfile& profile, const BranchPotentials& pots,
                                 std::span<const double> slopes, std::span<const double> t_list,
                                 const QuadratureConfig& quad, double cq, int jobs) {
  std::vector<RayResult> rays(slopes.size());
  for (std::size_t r = 0; r < slopes.size(); ++r) {
    rays[r].slope = slopes[r];
    rays[r].samples.resize(t_list.size());
  }
  const std::size_t nt = t_list.size();
  parallel_for(slopes.size() * nt, jobs, [&](std::size_t idx) {
    RaySample& s = rays[idx / nt].samples[idx % nt];
    s.t = t_list[idx % nt];
    s.x = s.t / slopes[idx / nt];
    const SpaceTimePoint pt{s.t, s.x};
    s.u = u_plus(pt, profile, pots, quad, cq).value;
    s.h = coefficient_H(pt, profile, pots, cq);
    s.scaled_rem = s.t * std::abs(s.u - s.h / std::sqrt(s.t));
  });
  for (auto& ray : rays) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& s : ray.samples) {
      ray.rem_max = std::max(ray.rem_max, s.scaled_rem);
      if (std::abs(s.u) > 0.0) pts.emplace_back(s.t, std::abs(s.u));
    }
    if (!ray.samples.empty()) ray.rem_first = ray.samples.front().scaled_rem;
    if (pts.size() >= 3) ray.fit = decay_fit(pts);
  }
  return rays;
}

// ---------------------------------------------------------------- coefficient sandwich

SandwichResult run_sandwich(const EnergyBand& band, double a1, ProfileShape shape, std::span<const double> a2_list,
                            int count, double t_lo, double t_hi, std::uint64_t seed) {
  if (a2_list.empty() || count < 2) throw std::invalid_argument("run_sandwich needs a2 values and count >= 2");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  SandwichResult res;
  res.min_upper_margin = res.min_lower_margin = res.min_lower_ratio = std::numeric_limits<double>::infinity();
  const int cells = static_cast<int>(a2_list.size()) * 2;
  for (int c = 0; c < cells; ++c) {
    const double a2 = a2_list[c / 2];
    const ConeKind kind = c % 2 == 0 ? ConeKind::outer : ConeKind::inner;
    const BranchPotentials pots{a1, a2};
    const SpectralProfile profile(band, a2, shape);
    const ConeSpec cone = make_cone(pots, band);
    const double lo = kind == ConeKind::outer ? cone.slope_low : cone.inner_slope_low;
    const double hi = kind == ConeKind::outer ? cone.slope_high : cone.inner_slope_high;
    const double g = bound_g(pots, band.beta);
    const double fm = bound_f(pots, band) * profile.plateau_floor();
    // spread the remainder of count/cells over the first cells
    const int n = count / cells + (c < count % cells ? 1 : 0);
    for (int i = 0; i < n; ++i) {
      SandwichSample s;
      s.a2 = a2;
      s.cone = kind;
      s.t = t_lo * std::pow(t_hi / t_lo, u01(rng));
      s.x = s.t / (lo + (hi - lo) * u01(rng));
      s.abs_h = coefficient_modulus({s.t, s.x}, profile, pots);
      s.g = g;
      s.fm = fm;
      res.min_upper_margin = std::min(res.min_upper_margin, g - s.abs_h);
      if (s.abs_h > g) ++res.upper_violations;
      if (kind == ConeKind::inner) {
        res.min_lower_margin = std::min(res.min_lower_margin, s.abs_h - fm);
        res.min_lower_ratio = std::min(res.min_lower_ratio, fm > 0.0 ? s.abs_h / fm : 0.0);
        if (s.abs_h < fm) ++res.lower_violations;
      }
      res.samples.push_back(s);
    }
  }
  return res;
}

AsymptoteRatios asymptote_ratios(const EnergyBand& band, double a1, double a2) {
  const BranchPotentials pots{a1, a2};
  const SpectralProfile profile(band, a2);
  AsymptoteRatios r;
  r.a2 = a2;
  r.g_ratio = bound_g(pots, band.beta) / bound_g_asymptote(a2, band.beta);
  r.f_ratio = bound_f(pots, band) / bound_f_asymptote(a2, band.alpha);
  r.branch_bound_ratio = plancherel_bound(profile, pots) / plancherel_bound_asymptote(profile, a2);
  return r;
}

// ---------------------------------------------------------------- energy

namespace {

ScalingResult scaling(std::span<const double> a2_list, int jobs, const std::function<ScalingPoint(double)>& cell) {
  ScalingResult res;
  res.points.resize(a2_list.size());
  parallel_for(a2_list.size(), jobs, [&](std::size_t i) { res.points[i] = cell(a2_list[i]); });
  std::vector<std::pair<double, double>> pts;
  for (const auto& p : res.points)
    if (p.value > 0.0) pts.emplace_back(p.a2, p.value);
  if (pts.size() >= 3) res.fit = decay_fit(pts);
  return res;
}

}  // namespace

ScalingResult run_branch_scaling(double t, std::span<const double> a2_list, const EnergyBand& band, double a1,
                                 ProfileShape shape, const QuadratureConfig& quad, double cq, int jobs) {
  return scaling(a2_list, jobs, [&](double a2) {
    const BranchPotentials pots{a1, a2};
    const SpectralProfile profile(band, a2, shape);
    const BranchNorm n = l2_branch(t, profile, pots, quad, cq);
    return ScalingPoint{a2, n.norm, n.plancherel_bound};
  });
}

ScalingResult run_cone_scaling(double t, std::span<const double> a2_list, const EnergyBand& band, double a1,
                               ProfileShape shape, const QuadratureConfig& quad, double cq, int jobs) {
  return scaling(a2_list, jobs, [&](double a2) {
    const BranchPotentials pots{a1, a2};
    const SpectralProfile profile(band, a2, shape);
    const ConeNorm n = l2_cone(t, profile, pots, quad, cq);
    return ScalingPoint{a2, n.norm * n.norm, cone_upper_asymptote(band, a2)};
  });
}

std::vector<ConeWindow> cone_windows(const std::vector<EnergyReport>& rows, double t0_cap) {
  std::map<double, std::vector<EnergyReport>> by_a2;
  for (const auto& r : rows) by_a2[r.a2].push_back(r);
  std::vector<ConeWindow> out;
  for (auto& [a2, group] : by_a2) {
    std::sort(group.begin(), group.end(), [](const auto& a, const auto& b) { return a.t < b.t; });
    ConeWindow w;
    w.a2 = a2;
    w.rows = group;
    auto capped = [&](std::optional<double> t0) { return t0 && *t0 <= t0_cap ? t0 : std::nullopt; };
    w.t0_cone = capped(locate_t0(std::span<const EnergyReport>(w.rows), [](const EnergyReport& r) {
      const double sq = r.norm_cone * r.norm_cone;
      return sq >= r.bound_lower_cone && sq <= r.bound_upper_cone;
    }));
    w.t0_ratio = capped(locate_t0(std::span<const EnergyReport>(w.rows),
                                  [](const EnergyReport& r) { return r.ratio <= r.bound_ratio; }));
    w.t0_used = w.t0_cone ? w.t0_cone : w.t0_ratio;
    for (const auto& r : w.rows)
      if (!w.t0_used || r.t >= *w.t0_used) w.max_ratio_after_t0 = std::max(w.max_ratio_after_t0, r.ratio);
    out.push_back(std::move(w));
  }
  return out;
}

// ---------------------------------------------------------------- FDTD

std::vector<FdtdRun> run_fdtd(const SpectralProfile& profile, const BranchPotentials& pots, const FdtdSetup& setup,
                              const QuadratureConfig& quad, double cq, int jobs) {
  // spectral reference on the comparison grid, shared by every dx
  const auto nx = static_cast<std::size_t>(std::floor(setup.x_compare / setup.spacing + 1e-9)) + 1;
  const std::size_t nt = setup.t_list.size();
  std::vector<cplx> ref(nt * nx);
  parallel_for(ref.size(), jobs, [&](std::size_t i) {
    const double t = setup.t_list[i / nx];
    const double x = setup.spacing * static_cast<double>(i % nx);
    ref[i] = u2({t, x}, profile, pots, quad, cq).value;
  });

  std::vector<FdtdRun> runs(setup.dx_list.size());
  parallel_for(runs.size(), jobs, [&](std::size_t r) {
    FdtdRun& run = runs[r];
    run.dx = setup.dx_list[r];
    const FdtdParams params{run.dx, 0.5 * run.dx, setup.length};
    const SampledBranchFunction u0 = reconstruct_initial_sampled(profile, pots, run.dx, setup.length, quad, cq);
    FdtdSolver solver(u0, pots, params);
    solver.step();
    run.initial_energy = solver.discrete_energy();
    auto track = [&] {
      const double e = solver.discrete_energy();
      if (run.initial_energy != 0.0)
        run.energy_drift = std::max(run.energy_drift, std::abs(e - run.initial_energy) / std::abs(run.initial_energy));
    };
    for (std::size_t k = 0; k < nt; ++k) {
      const long target = std::lround(setup.t_list[k] / params.dt);
      while (solver.steps() < target) {
        solver.step();
        if (solver.steps() % 20 == 0) track();
      }
      track();
      run.stats.push_back(compare(
          solver,
          [&](double x) { return ref[k * nx + static_cast<std::size_t>(std::lround(x / setup.spacing))]; },
          setup.x_compare, setup.spacing));
    }
    run.steps = solver.steps();
  });
  return runs;
}

// ---------------------------------------------------------------- identities

IdentityResult run_identities(const EnergyBand& band, const BranchPotentials& pots, int count, std::uint64_t seed) {
  band.validate();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const ConeSpec cone = make_cone(pots, band);
  const double a2 = pots.a2;
  const double s_lo = std::max(1.0 + 1e-3, 0.8 * cone.slope_low), s_hi = 1.25 * cone.slope_high;
  IdentityResult res;
  res.points = count;
  constexpr double h = 1e-3;
  for (int i = 0; i < count; ++i) {
    const double t = std::pow(10.0, 4.0 * u01(rng));
    const double x = t / (s_lo + (s_hi - s_lo) * u01(rng));
    const SpaceTimePoint pt{t, x};
    const double p0 = stationary_point(pt, a2);
    const double lam = a2 + p0 * p0;

    const bool outer = in_cone(pt, cone, ConeKind::outer);
    const bool p_in = p0 >= std::sqrt(band.alpha) && p0 <= std::sqrt(band.beta);
    const bool lam_in = lam >= a2 + band.alpha && lam <= a2 + band.beta;
    if (outer != p_in || p_in != lam_in) ++res.cone_violations;
    const bool inner = in_cone(pt, cone, ConeKind::inner);
    if (inner != (p0 >= std::sqrt(band.alpha_prime) && p0 <= std::sqrt(band.beta_prime))) ++res.inner_violations;

    // D_h φ(p₀) = φ'''(p₀) h²/6 + O(h⁴) since φ'(p₀) = 0
    const double d = (phase(p0 + h, pt, a2) - phase(p0 - h, pt, a2)) / (2.0 * h);
    const double third = -3.0 * t * a2 * p0 / std::pow(a2 + p0 * p0, 2.5);
    const double lead = std::abs(third) * h * h / 6.0;
    const double rounding = 8.0 * std::numeric_limits<double>::epsilon() * std::abs(phase(p0, pt, a2)) / h;
    const double ratio = std::abs(d) / lead;
    res.max_derivative_ratio = std::max(res.max_derivative_ratio, ratio);
    if (std::abs(d - third * h * h / 6.0) > 0.1 * lead + rounding) ++res.derivative_violations;
  }
  return res;
}

}  // namespace kgstar
