// kgstar: runs the verification experiments and writes their tables.
//
//   kgstar <subcommand> [--config cfg.json] [--out DIR] [--seed N] [--jobs N]
//
// Subcommands: transform-check, decay, coefficient, energy, oracle, all.
// Exit status is 0 iff every check of the selected subcommands passes.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kgstar/asymptotics.hpp"
#include "kgstar/energy_flow.hpp"
#include "kgstar/experiments.hpp"
#include "kgstar/fdtd.hpp"
#include "kgstar/initial_data.hpp"
#include "kgstar/transform.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace kgstar;

namespace {

std::string fmt(const char* f, auto... args) {
  char buf[1024];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// ---------------------------------------------------------------- configuration

struct Config {
  double a1 = 0.0;
  double a2 = 1.0;
  EnergyBand band;
  std::string shape = "plateau";
  double cq = kPlancherelConstant;
  QuadratureConfig quad;

  struct {
    int pairs = 20;
    double tol = 1e-5;
    double sample_step = 0.1;
    double sample_end = 40.0;
  } transform;

  struct {
    int rays = 5;
    double t_min = 1e2;
    double t_max = 1e4;
    int t_points = 25;
    double slope = -0.5;
    double slope_tol = 0.02;
  } decay;

  struct {
    double growth_limit = 3.0;
    int points = 1000;
    std::vector<double> a2_list{1.0, 10.0, 100.0};
    double t_min = 1.0;
    double t_max = 1e4;
    double asymptote_a2 = 1e6;
    double asymptote_tol = 0.01;
    int identity_points = 1000;
  } coefficient;

  struct {
    std::vector<double> t_list{1e2, 2e2, 5e2, 1e3, 2e3, 5e3, 1e4};
    std::vector<double> a2_list{1.0, 10.0, 100.0};
    double eps_fraction = 0.05;
    double t0_cap = 1e3;
    std::vector<double> sweep_a2{10.0, 1e2, 1e3, 1e4};
    double branch_t = 1e3;
    double branch_slope = -0.5;
    double branch_slope_tol = 0.05;
    double plancherel_slack = 1e-6;
    double cone_t = 1e4;
    double cone_slope = -1.0;
    double cone_slope_tol = 0.1;
    double spread_a2_low = 1e2;
    double spread_a2_high = 1e4;
    double spread_tol = 0.05;
  } energy;

  struct {
    std::vector<double> dx{0.01, 0.005};
    std::vector<double> t{5.0, 10.0, 20.0};
    double x_compare = 60.0;
    double spacing = 0.1;
    double length = 160.0;
    double tol = 1e-3;
    double rate_lo = 3.0;
    double rate_hi = 5.0;
    double drift_tol = 1e-6;
  } oracle;

  ProfileShape profile_shape() const {
    if (shape == "plateau") return ProfileShape::plateau;
    if (shape == "raised_cosine") return ProfileShape::raised_cosine;
    if (shape == "zero") return ProfileShape::zero;
    throw std::invalid_argument("unknown profile shape '" + shape + "' (plateau, raised_cosine, zero)");
  }
  BranchPotentials pots() const { return {a1, a2}; }
  SpectralProfile profile() const { return SpectralProfile(band, a2, profile_shape()); }
};

// Reads `key` into `v` when present; records the key as known.
struct Reader {
  const json& j;
  std::vector<std::string> known;
  template <class T>
  void operator()(const char* key, T& v) {
    known.emplace_back(key);
    if (j.contains(key)) v = j.at(key).get<T>();
  }
  void finish(const std::string& where) const {
    for (const auto& [k, _] : j.items())
      if (std::find(known.begin(), known.end(), k) == known.end())
        throw std::invalid_argument("unknown config key '" + where + k + "'");
  }
};

template <class Visit>
void visit(Config& c, Visit&& top, auto&& section) {
  top("a1", c.a1);
  top("a2", c.a2);
  top("alpha", c.band.alpha);
  top("alpha_prime", c.band.alpha_prime);
  top("beta_prime", c.band.beta_prime);
  top("beta", c.band.beta);
  top("m", c.band.m);
  top("shape", c.shape);
  top("cq", c.cq);
  section("quad", [&](auto&& f) {
    f("abs_tol", c.quad.abs_tol);
    f("rel_tol", c.quad.rel_tol);
    f("max_panels", c.quad.max_panels);
    f("points_per_period", c.quad.points_per_period);
  });
  section("transform", [&](auto&& f) {
    f("pairs", c.transform.pairs);
    f("tol", c.transform.tol);
    f("sample_step", c.transform.sample_step);
    f("sample_end", c.transform.sample_end);
  });
  section("decay", [&](auto&& f) {
    f("rays", c.decay.rays);
    f("t_min", c.decay.t_min);
    f("t_max", c.decay.t_max);
    f("t_points", c.decay.t_points);
    f("slope", c.decay.slope);
    f("slope_tol", c.decay.slope_tol);
  });
  section("coefficient", [&](auto&& f) {
    f("growth_limit", c.coefficient.growth_limit);
    f("points", c.coefficient.points);
    f("a2_list", c.coefficient.a2_list);
    f("t_min", c.coefficient.t_min);
    f("t_max", c.coefficient.t_max);
    f("asymptote_a2", c.coefficient.asymptote_a2);
    f("asymptote_tol", c.coefficient.asymptote_tol);
    f("identity_points", c.coefficient.identity_points);
  });
  section("energy", [&](auto&& f) {
    f("t_list", c.energy.t_list);
    f("a2_list", c.energy.a2_list);
    f("eps_fraction", c.energy.eps_fraction);
    f("t0_cap", c.energy.t0_cap);
    f("sweep_a2", c.energy.sweep_a2);
    f("branch_t", c.energy.branch_t);
    f("branch_slope", c.energy.branch_slope);
    f("branch_slope_tol", c.energy.branch_slope_tol);
    f("plancherel_slack", c.energy.plancherel_slack);
    f("cone_t", c.energy.cone_t);
    f("cone_slope", c.energy.cone_slope);
    f("cone_slope_tol", c.energy.cone_slope_tol);
    f("spread_a2_low", c.energy.spread_a2_low);
    f("spread_a2_high", c.energy.spread_a2_high);
    f("spread_tol", c.energy.spread_tol);
  });
  section("oracle", [&](auto&& f) {
    f("dx", c.oracle.dx);
    f("t", c.oracle.t);
    f("x_compare", c.oracle.x_compare);
    f("spacing", c.oracle.spacing);
    f("length", c.oracle.length);
    f("tol", c.oracle.tol);
    f("rate_lo", c.oracle.rate_lo);
    f("rate_hi", c.oracle.rate_hi);
    f("drift_tol", c.oracle.drift_tol);
  });
}

Config load_config(const json& j) {
  Config c;
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  Reader top{j, {}};
  std::vector<std::pair<std::string, Reader>> sections;
  visit(c, top, [&](const char* name, auto&& body) {
    top.known.emplace_back(name);
    if (!j.contains(name)) return;
    Reader r{j.at(name), {}};
    body(r);
    r.finish(std::string(name) + ".");
  });
  top.finish("");
  c.band.validate();
  c.pots().validate();
  c.quad.validate();
  c.profile_shape();
  return c;
}

json dump_config(Config c) {
  json j = json::object();
  visit(
      c, [&](const char* key, const auto& v) { j[key] = v; },
      [&](const char* name, auto&& body) {
        json s = json::object();
        body([&](const char* key, const auto& v) { s[key] = v; });
        j[name] = s;
      });
  return j;
}

// ---------------------------------------------------------------- reporting

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

class Runner {
 public:
  Runner(Config cfg, fs::path out, std::uint64_t seed, int jobs)
      : cfg_(std::move(cfg)), out_(std::move(out)), seed_(seed), jobs_(jobs) {}

  void transform_check();
  void decay();
  void coefficient();
  void energy();
  void oracle();

  void finish();
  bool all_pass() const {
    return std::all_of(checks_.begin(), checks_.end(), [](const Check& c) { return c.pass; });
  }

 private:
  std::ofstream open(const std::string& name) {
    std::ofstream os(out_ / name);
    if (!os) throw std::runtime_error("cannot write " + (out_ / name).string());
    os.precision(12);
    return os;
  }
  void dat(const std::string& name, const std::vector<std::pair<double, double>>& xy, const std::string& title) {
    auto os = open(name);
    os << "# " << title << '\n';
    for (const auto& [x, y] : xy) os << x << ' ' << y << '\n';
    plots_.emplace_back(name, title);
  }
  void check(std::string name, bool pass, std::string detail) {
    std::printf("[%s] %s: %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    std::fflush(stdout);
    checks_.push_back({std::move(name), pass, std::move(detail)});
  }
  void skip(std::string name) { check(std::move(name), true, "skipped (zero profile)"); }
  const std::vector<RayResult>& rays();

  Config cfg_;
  fs::path out_;
  std::uint64_t seed_;
  int jobs_;
  std::vector<Check> checks_;
  std::vector<std::pair<std::string, std::string>> plots_;
  std::optional<std::vector<RayResult>> rays_;
};

void Runner::transform_check() {
  const PlancherelSuite s = run_plancherel(cfg_.transform.pairs, seed_, cfg_.quad, cfg_.cq, jobs_);
  {
    auto os = open("transform_plancherel.csv");
    os << "case,a1,a2,h_norm,q_norm,unit_ratio,rel_dev\n";
    for (std::size_t i = 0; i < s.cases.size(); ++i) {
      const auto& c = s.cases[i];
      os << i << ',' << c.pots.a1 << ',' << c.pots.a2 << ',' << c.h_norm << ',' << c.q_norm << ',' << c.unit_ratio
         << ',' << c.rel_dev << '\n';
    }
  }
  std::string detail = fmt("plancherel_residual %.3e over %d pairs (tol %.0e); measured constant %.8f, calibrated "
                           "c_q %.8f, configured c_q %.8f",
                           s.max_rel_dev, cfg_.transform.pairs, cfg_.transform.tol, s.measured_constant,
                           s.calibrated_cq, cfg_.cq);
  const bool ok = s.max_rel_dev < cfg_.transform.tol;
  if (!ok) detail = "calibration failure: " + detail;
  check("transform.plancherel", ok, detail);

  const SpectralProfile profile = cfg_.profile();
  const RoundTripReport rt = round_trip(profile, cfg_.pots(), cfg_.quad, cfg_.cq);
  {
    auto os = open("transform_roundtrip.csv");
    os << "a1,a2,alpha,alpha_prime,beta_prime,beta,residual,profile_norm,out_of_band,x_max\n";
    const auto& b = cfg_.band;
    os << cfg_.a1 << ',' << cfg_.a2 << ',' << b.alpha << ',' << b.alpha_prime << ',' << b.beta_prime << ','
       << b.beta << ',' << rt.residual << ',' << rt.profile_norm << ',' << rt.out_of_band << ',' << rt.x_max << '\n';
  }
  check("transform.round_trip", rt.residual < cfg_.transform.tol,
        fmt("relative q-norm residual %.3e, out-of-band %.3e, |psi|_q %.6e, X_max %g (tol %.0e)", rt.residual,
            rt.out_of_band, rt.profile_norm, rt.x_max, cfg_.transform.tol));

  const auto u0 = reconstruct_initial_sampled(profile, cfg_.pots(), cfg_.transform.sample_step,
                                              cfg_.transform.sample_end, cfg_.quad, cfg_.cq);
  auto os = open("initial_data.csv");
  write_csv(os, u0);
  std::vector<std::pair<double, double>> xy;
  for (std::size_t i = 0; i < u0.v2.size(); ++i) xy.emplace_back(u0.x(i), std::abs(u0.v2[i]));
  dat("initial_data_branch2.dat", xy, "|u0| on branch 2 vs x");
}

const std::vector<RayResult>& Runner::rays() {
  if (!rays_) {
    const auto pots = cfg_.pots();
    const auto slopes = inner_rays(make_cone(pots, cfg_.band), cfg_.decay.rays);
    const auto times = log_grid(cfg_.decay.t_min, cfg_.decay.t_max, cfg_.decay.t_points);
    rays_ = run_decay(cfg_.profile(), pots, slopes, times, cfg_.quad, cfg_.cq, jobs_);
  }
  return *rays_;
}

void Runner::decay() {
  const auto& rs = rays();
  {
    auto os = open("decay_samples.csv");
    os << "ray,slope,t,x,re_u,im_u,abs_u,re_h,im_h,scaled_rem\n";
    for (std::size_t r = 0; r < rs.size(); ++r)
      for (const auto& s : rs[r].samples)
        os << r << ',' << rs[r].slope << ',' << s.t << ',' << s.x << ',' << s.u.real() << ',' << s.u.imag() << ','
           << std::abs(s.u) << ',' << s.h.real() << ',' << s.h.imag() << ',' << s.scaled_rem << '\n';
  }
  auto os = open("decay_fits.csv");
  os << "ray,slope,fit_slope,intercept,residual\n";
  for (std::size_t r = 0; r < rs.size(); ++r) {
    const auto& ray = rs[r];
    std::vector<std::pair<double, double>> xy;
    for (const auto& s : ray.samples) xy.emplace_back(s.t, std::abs(s.u));
    dat(fmt("decay_ray%zu.dat", r), xy, fmt("|u+| vs t on ray t/x = %.6f", ray.slope));
    if (!ray.fit) {
      os << r << ',' << ray.slope << ",,,\n";
      skip(fmt("decay.ray%zu", r));
      continue;
    }
    os << r << ',' << ray.slope << ',' << ray.fit->slope << ',' << ray.fit->intercept << ',' << ray.fit->residual
       << '\n';
    check(fmt("decay.ray%zu", r), std::abs(ray.fit->slope - cfg_.decay.slope) <= cfg_.decay.slope_tol,
          fmt("t/x = %.5f: log-log slope %.4f, RMS residual %.2e (target %.2f +- %.2f)", ray.slope, ray.fit->slope,
              ray.fit->residual, cfg_.decay.slope, cfg_.decay.slope_tol));
  }
}

void Runner::coefficient() {
  const SpectralProfile profile = cfg_.profile();
  const auto& rs = rays();
  {
    auto os = open("coefficient_remainder.csv");
    os << "ray,slope,t,scaled_rem\n";
    for (std::size_t r = 0; r < rs.size(); ++r) {
      std::vector<std::pair<double, double>> xy;
      for (const auto& s : rs[r].samples) {
        os << r << ',' << rs[r].slope << ',' << s.t << ',' << s.scaled_rem << '\n';
        xy.emplace_back(s.t, s.scaled_rem);
      }
      dat(fmt("coefficient_remainder_ray%zu.dat", r), xy, fmt("t|u+ - H t^-1/2| on ray t/x = %.6f", rs[r].slope));
    }
  }
  if (profile.is_zero()) {
    skip("coefficient.remainder");
  } else {
    bool ok = true;
    double c_hat = 0.0;
    std::string d = "growth per ray:";
    for (const auto& ray : rs) {
      const double growth = ray.rem_max / ray.rem_first;
      ok = ok && growth <= cfg_.coefficient.growth_limit;
      c_hat = std::max(c_hat, ray.rem_max);
      d += fmt(" %.3f", growth);
    }
    check("coefficient.remainder", ok,
          d + fmt(" (limit %.1f); empirical constant %.4f", cfg_.coefficient.growth_limit, c_hat));
  }

  const auto& cc = cfg_.coefficient;
  const SandwichResult s =
      run_sandwich(cfg_.band, cfg_.a1, profile.shape(), cc.a2_list, cc.points, cc.t_min, cc.t_max, seed_);
  {
    auto os = open("coefficient_sandwich.csv");
    os << "a2,t,x,cone,abs_h,g,fm,margin\n";
    for (const auto& p : s.samples) {
      const bool outer = p.cone == ConeKind::outer;
      os << p.a2 << ',' << p.t << ',' << p.x << ',' << (outer ? "outer" : "inner") << ',' << p.abs_h << ',' << p.g
         << ',' << p.fm << ',' << (outer ? p.g - p.abs_h : p.abs_h - p.fm) << '\n';
    }
  }
  check("coefficient.upper", s.upper_violations == 0,
        fmt("|H| <= g: %d violations, min margin %.4e", s.upper_violations, s.min_upper_margin));
  if (profile.is_zero())
    skip("coefficient.lower");
  else
    check("coefficient.lower", s.lower_violations == 0,
          fmt("|H| >= f m: %d violations, min margin %.4e, min |H|/(f m) %.4f", s.lower_violations,
              s.min_lower_margin, s.min_lower_ratio));

  const AsymptoteRatios r = asymptote_ratios(cfg_.band, cfg_.a1, cc.asymptote_a2);
  {
    auto os = open("coefficient_asymptotes.csv");
    os << "a2,g_ratio,f_ratio,branch_bound_ratio\n";
    os << r.a2 << ',' << r.g_ratio << ',' << r.f_ratio << ',' << r.branch_bound_ratio << '\n';
  }
  check("coefficient.asymptotes",
        std::abs(r.g_ratio - 1.0) < cc.asymptote_tol && std::abs(r.f_ratio - 1.0) < cc.asymptote_tol,
        fmt("at a2 = %g: g/asymptote %.6f, f m/asymptote %.6f (tol %.2f)", r.a2, r.g_ratio, r.f_ratio,
            cc.asymptote_tol));

  const IdentityResult id = run_identities(cfg_.band, cfg_.pots(), cc.identity_points, seed_);
  check("coefficient.identities",
        id.cone_violations == 0 && id.inner_violations == 0 && id.derivative_violations == 0,
        fmt("%d points: cone/spectrum %d, inner %d, derivative %d violations (max ratio %.4f)", id.points,
            id.cone_violations, id.inner_violations, id.derivative_violations, id.max_derivative_ratio));
}

void Runner::energy() {
  const auto& ec = cfg_.energy;
  const ProfileShape shape = cfg_.profile_shape();
  const bool zero = shape == ProfileShape::zero;

  RatioReportOptions opts;
  opts.a1 = cfg_.a1;
  opts.shape = shape;
  opts.eps_fraction = ec.eps_fraction;
  opts.jobs = jobs_;
  opts.cq = cfg_.cq;
  const auto rows = ratio_report(ec.t_list, ec.a2_list, cfg_.band, cfg_.quad, opts);
  {
    auto os = open("energy_report.csv");
    write_csv(os, rows);
  }
  const auto wins = cone_windows(rows, ec.t0_cap);
  {
    auto os = open("energy_windows.csv");
    os << "a2,t0_cone,t0_ratio,t0_used,max_ratio_after_t0,bound_ratio,bound_ratio_asymptote\n";
    auto opt = [](const std::optional<double>& v) { return v ? fmt("%.12g", *v) : std::string(); };
    for (const auto& w : wins)
      os << w.a2 << ',' << opt(w.t0_cone) << ',' << opt(w.t0_ratio) << ',' << opt(w.t0_used) << ','
         << w.max_ratio_after_t0 << ',' << w.rows.front().bound_ratio << ','
         << w.rows.front().bound_ratio_asymptote << '\n';
  }
  for (const auto& w : wins) {
    std::vector<std::pair<double, double>> xy;
    for (const auto& r : w.rows)
      if (!r.failed) xy.emplace_back(r.t, r.norm_cone * r.norm_cone);
    dat(fmt("energy_cone_a2_%g.dat", w.a2), xy, fmt("cone norm^2 vs t, a2 = %g", w.a2));
  }
  const int failed = static_cast<int>(std::count_if(rows.begin(), rows.end(), [](auto& r) { return r.failed; }));
  check("energy.cells", failed == 0, fmt("%d of %zu (t, a2) cells failed", failed, rows.size()));

  const ScalingResult bs = run_branch_scaling(ec.branch_t, ec.sweep_a2, cfg_.band, cfg_.a1, shape, cfg_.quad,
                                              cfg_.cq, jobs_);
  const ScalingResult cs =
      run_cone_scaling(ec.cone_t, ec.sweep_a2, cfg_.band, cfg_.a1, shape, cfg_.quad, cfg_.cq, jobs_);
  {
    auto os = open("energy_scaling.csv");
    os << "kind,t,a2,value,bound\n";
    for (const auto& p : bs.points) os << "branch_norm," << ec.branch_t << ',' << p.a2 << ',' << p.value << ',' << p.bound << '\n';
    for (const auto& p : cs.points) os << "cone_norm_sq," << ec.cone_t << ',' << p.a2 << ',' << p.value << ',' << p.bound << '\n';
  }
  std::vector<std::pair<double, double>> bxy, cxy;
  for (const auto& p : bs.points) bxy.emplace_back(p.a2, p.value);
  for (const auto& p : cs.points) cxy.emplace_back(p.a2, p.value);
  dat("energy_branch_scaling.dat", bxy, fmt("branch norm vs a2 at t = %g", ec.branch_t));
  dat("energy_cone_scaling.dat", cxy, fmt("cone norm^2 vs a2 at t = %g", ec.cone_t));

  bool below = true;
  for (const auto& p : bs.points) below = below && p.value <= p.bound + ec.plancherel_slack;
  check("energy.branch_bound", below, fmt("branch norms below the Plancherel bound at t = %g", ec.branch_t));
  if (zero) {
    skip("energy.branch_slope");
    skip("energy.cone_slope");
  } else {
    const double b = bs.fit ? bs.fit->slope : 0.0, c = cs.fit ? cs.fit->slope : 0.0;
    check("energy.branch_slope", bs.fit && std::abs(b - ec.branch_slope) <= ec.branch_slope_tol,
          fmt("slope %.4f (target %.2f +- %.2f)", b, ec.branch_slope, ec.branch_slope_tol));
    check("energy.cone_slope", cs.fit && std::abs(c - ec.cone_slope) <= ec.cone_slope_tol,
          fmt("slope %.4f (target %.2f +- %.2f)", c, ec.cone_slope, ec.cone_slope_tol));
  }

  for (const auto& w : wins) {
    if (zero) {
      skip(fmt("energy.cone_bounds.a2_%g", w.a2));
      skip(fmt("energy.ratio.a2_%g", w.a2));
      continue;
    }
    check(fmt("energy.cone_bounds.a2_%g", w.a2), w.t0_cone.has_value(),
          w.t0_cone ? fmt("both displays hold for t >= %g", *w.t0_cone)
                    : fmt("no t0 <= %g after which both displays hold", ec.t0_cap));
    const double bound = w.rows.front().bound_ratio;
    check(fmt("energy.ratio.a2_%g", w.a2), w.t0_used && w.max_ratio_after_t0 <= bound,
          fmt("max ratio %.4f for t >= %s vs bound %.4f", w.max_ratio_after_t0,
              w.t0_used ? fmt("%g", *w.t0_used).c_str() : "-", bound));
  }
  const SpectralProfile pl(cfg_.band, ec.spread_a2_low), ph(cfg_.band, ec.spread_a2_high);
  const double bl = ratio_bound(pl, {cfg_.a1, ec.spread_a2_low}), bh = ratio_bound(ph, {cfg_.a1, ec.spread_a2_high});
  const double spread = std::abs(bl - bh) / bh;
  check("energy.ratio_bound_spread", spread < ec.spread_tol,
        fmt("bound at a2 = %g: %.4f, at a2 = %g: %.4f, relative difference %.2f%% (limit %.0f%%)", ec.spread_a2_low,
            bl, ec.spread_a2_high, bh, 100.0 * spread, 100.0 * ec.spread_tol));
}

void Runner::oracle() {
  const auto& oc = cfg_.oracle;
  FdtdSetup setup;
  setup.dx_list = oc.dx;
  setup.t_list = oc.t;
  setup.x_compare = oc.x_compare;
  setup.spacing = oc.spacing;
  setup.length = oc.length;
  const auto runs = run_fdtd(cfg_.profile(), cfg_.pots(), setup, cfg_.quad, cfg_.cq, jobs_);
  {
    auto os = open("oracle_comparison.csv");
    os << "dx,t,rel_l2,max_rel,samples\n";
    for (const auto& r : runs)
      for (const auto& s : r.stats) os << r.dx << ',' << s.t << ',' << s.rel_l2 << ',' << s.max_rel << ',' << s.samples << '\n';
  }
  {
    auto os = open("oracle_energy.csv");
    os << "dx,steps,initial_energy,energy_drift\n";
    for (const auto& r : runs) os << r.dx << ',' << r.steps << ',' << r.initial_energy << ',' << r.energy_drift << '\n';
  }
  for (const auto& r : runs) {
    std::vector<std::pair<double, double>> xy;
    for (const auto& s : r.stats) xy.emplace_back(s.t, s.rel_l2);
    dat(fmt("oracle_error_dx_%g.dat", r.dx), xy, fmt("relative L2 discrepancy vs t, dx = %g", r.dx));
  }
  if (runs.empty()) return;
  const bool zero = cfg_.profile().is_zero();
  bool ok = true;
  std::string d;
  for (std::size_t k = 0; k < oc.t.size(); ++k) {
    const double e = runs[0].stats[k].rel_l2;
    ok = ok && e < oc.tol;
    d += fmt(" t=%g: %.3e", oc.t[k], e);
  }
  check("oracle.discrepancy", ok, fmt("dx = %g:", runs[0].dx) + d + fmt(" (tol %.0e)", oc.tol));
  if (runs.size() > 1 && !zero) {
    bool rate_ok = true;
    std::string rd;
    for (std::size_t k = 0; k < oc.t.size(); ++k) {
      const double rate = runs[0].stats[k].rel_l2 / runs[1].stats[k].rel_l2;
      rate_ok = rate_ok && rate >= oc.rate_lo && rate <= oc.rate_hi;
      rd += fmt(" t=%g: x%.2f", oc.t[k], rate);
    }
    check("oracle.convergence", rate_ok,
          fmt("dx %g -> %g:", runs[0].dx, runs[1].dx) + rd + fmt(" (range [%g, %g])", oc.rate_lo, oc.rate_hi));
  }
  double drift = 0.0;
  for (const auto& r : runs) drift = std::max(drift, r.energy_drift);
  check("oracle.energy", drift < oc.drift_tol, fmt("max relative drift %.2e (tol %.0e)", drift, oc.drift_tol));
}

void Runner::finish() {
  {
    auto os = open("summary.csv");
    os << "check,pass,detail\n";
    for (const auto& c : checks_) {
      std::string d = c.detail;
      std::replace(d.begin(), d.end(), '"', '\'');
      os << c.name << ',' << (c.pass ? 1 : 0) << ",\"" << d << "\"\n";
    }
  }
  auto os = open("plot.gp");
  os << "# gnuplot script for the two-column data files of this run: gnuplot plot.gp\n"
     << "set terminal pngcairo size 900,600\nset logscale xy\nset grid\n";
  for (const auto& [file, title] : plots_) {
    const std::string png = file.substr(0, file.size() - 4) + ".png";
    os << "set output '" << png << "'\nset title \"" << title << "\"\nplot '" << file
       << "' using 1:2 with linespoints notitle\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kgstar: Klein-Gordon waves on two half-axes with a potential step"};
  app.require_subcommand(1);
  std::string config_path, out_dir = "kgstar_out";
  std::uint64_t seed = 20240611;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  bool print_config = false;
  app.add_option("--config", config_path, "JSON config; missing keys take their defaults")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "seed for randomized samples");
  app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--print-config", print_config, "print the effective config and exit");
  app.fallthrough();

  const std::vector<std::pair<std::string, std::string>> commands{
      {"transform-check", "Plancherel calibration and round trip of the configured profile"},
      {"decay", "decay-rate fits along rays inside the inner cone"},
      {"coefficient", "remainder tables, coefficient sandwich and cone identities"},
      {"energy", "branch and cone norms, a2 sweeps and ratio bounds"},
      {"oracle", "finite-difference cross-check of the spectral solution"},
      {"all", "every experiment above"},
  };
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, help] : commands) subs[name] = app.add_subcommand(name, help);
  CLI11_PARSE(app, argc, argv);

  try {
    json j = json::object();
    if (!config_path.empty()) {
      std::ifstream is(config_path);
      j = json::parse(is);
    }
    const Config cfg = load_config(j);
    if (print_config) {
      std::cout << dump_config(cfg).dump(2) << '\n';
      return 0;
    }
    fs::create_directories(out_dir);
    {
      std::ofstream os(fs::path(out_dir) / "config.json");
      json dumped = dump_config(cfg);
      dumped["seed"] = seed;
      os << dumped.dump(2) << '\n';
    }
    Runner run(cfg, out_dir, seed, jobs);
    auto selected = [&](const char* name) { return subs.at(name)->parsed() || subs.at("all")->parsed(); };
    if (selected("transform-check")) run.transform_check();
    if (selected("decay")) run.decay();
    if (selected("coefficient")) run.coefficient();
    if (selected("energy")) run.energy();
    if (selected("oracle")) run.oracle();
    run.finish();
    return run.all_pass() ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "kgstar: %s\n", e.what());
    return 2;
  }
}
