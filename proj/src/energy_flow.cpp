#include "kgstar/energy_flow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "kgstar/asymptotics.hpp"
#include "kgstar/parallel.hpp"

namespace kgstar {

ConeInterval cone_interval(double t, const EnergyBand& band, double a2) {
  band.validate();
  return {t, t * std::sqrt(band.alpha_prime / (a2 + band.alpha_prime)),
          t * std::sqrt(band.beta_prime / (a2 + band.beta_prime))};
}

namespace {

struct MassResult {
  double mass;
  double error;
};

// ∫_lo^hi |u₊(t,x)|² dx with breakpoints at the group lines of the band.
MassResult mass(double t, double lo, double hi, double abs_floor, const SpectralProfile& profile,
                const BranchPotentials& pots, const QuadratureConfig& quad, double cq, const NormOptions& opts) {
  const auto& b = profile.band();
  const double a2 = pots.a2;
  std::vector<double> breaks;
  for (double e : {b.alpha, b.alpha_prime, b.beta_prime, b.beta}) breaks.push_back(t * std::sqrt(e / (a2 + e)));
  // extra seeds across the outer cone so the first pass sees the packet
  const double xl = breaks.front(), xh = breaks.back();
  for (int i = 1; i < 8; ++i) breaks.push_back(xl + (xh - xl) * i / 8.0);
  QuadratureConfig outer = quad;
  outer.rel_tol = opts.rel_tol;
  outer.abs_tol = abs_floor;
  auto f = [&](double x) { return std::norm(u_plus({t, x}, profile, pots, quad, cq).value); };
  const QuadResult r = quad::integrate(f, lo, hi, outer, breaks);
  if (!r.converged) throw QuadratureError("l2 norm: x-quadrature did not converge", r.error, t);
  return {r.value.real(), r.error};
}

}  // namespace

BranchNorm l2_branch(double t, const SpectralProfile& profile, const BranchPotentials& pots,
                     const QuadratureConfig& quad, double cq, const NormOptions& opts) {
  if (!(t >= 0.0)) throw std::invalid_argument("l2_branch needs t >= 0");
  check_profile_matches(profile, pots);
  BranchNorm out;
  out.plancherel_bound = plancherel_bound(profile, pots);
  if (profile.is_zero()) return out;
  double x = std::max(2.0 * t, opts.x_cut_min);
  MassResult inside = mass(t, 0.0, x, 1e-300, profile, pots, quad, cq, opts);
  for (int d = 0;; ++d) {
    const MassResult tail =
        mass(t, x, 2.0 * x, opts.rel_tol * inside.mass, profile, pots, quad, cq, opts);
    inside.mass += tail.mass;
    inside.error += tail.error;
    x *= 2.0;
    if (tail.mass <= opts.tail_tol * inside.mass) break;
    if (d + 1 >= opts.max_doublings)
      throw TruncationError("l2_branch: tail still significant at X_cut = " + std::to_string(x), x);
  }
  out.norm = std::sqrt(inside.mass);
  out.error = inside.error;
  out.x_cut = x;
  return out;
}

ConeNorm l2_cone(double t, const SpectralProfile& profile, const BranchPotentials& pots,
                 const QuadratureConfig& quad, double cq, const NormOptions& opts) {
  if (!(t > 0.0)) throw std::invalid_argument("l2_cone needs t > 0");
  check_profile_matches(profile, pots);
  ConeNorm out;
  out.interval = cone_interval(t, profile.band(), pots.a2);
  if (profile.is_zero()) return out;
  const MassResult m =
      mass(t, out.interval.x_low, out.interval.x_high, 1e-300, profile, pots, quad, cq, opts);
  out.norm = std::sqrt(std::max(0.0, m.mass));
  out.error = m.error;
  return out;
}

double plancherel_bound(const SpectralProfile& profile, const BranchPotentials& pots) {
  pots.validate();
  const auto& b = profile.band();
  return std::sqrt(b.beta) / (std::sqrt(pots.a2 - pots.a1 + b.alpha) * std::pow(b.alpha, 0.25)) *
         profile.l2_norm();
}

double plancherel_bound_asymptote(const SpectralProfile& profile, double a2) {
  const auto& b = profile.band();
  return std::sqrt(b.beta) / std::pow(b.alpha, 0.25) * profile.l2_norm() / std::sqrt(a2);
}

double cone_lower_display(double fm, double eps, const EnergyBand& band, double a2) {
  const double width = std::sqrt(band.beta_prime / (a2 + band.beta_prime)) -
                       std::sqrt(band.alpha_prime / (a2 + band.alpha_prime));
  const double amp = std::max(0.0, fm - eps);
  return amp * amp * width;
}

double cone_upper_display(double g, double eps, const EnergyBand& band, double a2) {
  const double width = std::sqrt(band.beta / (a2 + band.beta)) - std::sqrt(band.alpha / (a2 + band.alpha));
  return (g + eps) * (g + eps) * width;
}

double cone_upper_asymptote(const EnergyBand& band, double a2) {
  return 2.0 * std::numbers::pi * band.beta * (std::sqrt(band.beta) - std::sqrt(band.alpha)) / a2;
}

double ratio_bound(const SpectralProfile& profile, const BranchPotentials& pots, double eps) {
  const auto& b = profile.band();
  const double fm = bound_f(pots, b) * profile.plateau_floor();
  const double width = std::sqrt(b.beta_prime / (pots.a2 + b.beta_prime)) -
                       std::sqrt(b.alpha_prime / (pots.a2 + b.alpha_prime));
  return plancherel_bound(profile, pots) / ((fm - eps) * std::sqrt(width));
}

double ratio_bound_asymptote(const SpectralProfile& profile) {
  const auto& b = profile.band();
  return std::pow(2.0 * std::numbers::pi, -0.5) / profile.plateau_floor() * std::sqrt(b.beta) *
         std::pow(b.alpha, -0.75) / std::sqrt(std::sqrt(b.beta_prime) - std::sqrt(b.alpha_prime)) *
         profile.l2_norm();
}

std::vector<EnergyReport> ratio_report(std::span<const double> t_list, std::span<const double> a2_list,
                                       const EnergyBand& band, const QuadratureConfig& quad,
                                       const RatioReportOptions& opts) {
  band.validate();
  const std::size_t nt = t_list.size();
  std::vector<EnergyReport> rows(nt * a2_list.size());
  parallel_for(rows.size(), opts.jobs, [&](std::size_t idx) {
    EnergyReport& r = rows[idx];
    r.a2 = a2_list[idx / nt];
    r.t = t_list[idx % nt];
    const BranchPotentials pots{opts.a1, r.a2};
    const SpectralProfile profile(band, r.a2, opts.shape);
    const double fm = bound_f(pots, band) * profile.plateau_floor();
    const double g = bound_g(pots, band.beta);
    const double eps = opts.eps_fraction * fm;
    r.bound_upper_branch = plancherel_bound(profile, pots);
    r.bound_lower_cone = cone_lower_display(fm, eps, band, r.a2);
    r.bound_upper_cone = cone_upper_display(g, eps, band, r.a2);
    r.bound_ratio = ratio_bound(profile, pots);
    r.bound_ratio_asymptote = ratio_bound_asymptote(profile);
    try {
      const BranchNorm nb = l2_branch(r.t, profile, pots, quad, opts.cq, opts.norms);
      const ConeNorm nc = l2_cone(r.t, profile, pots, quad, opts.cq, opts.norms);
      r.norm_branch = nb.norm;
      r.norm_cone = nc.norm;
      r.x_cut = nb.x_cut;
      r.ratio = nc.norm > 0.0 ? nb.norm / nc.norm : 0.0;
    } catch (const std::exception& e) {
      r.failed = true;
      r.error = e.what();
    }
  });
  return rows;
}

void write_csv(std::ostream& os, const std::vector<EnergyReport>& rows) {
  os.precision(12);
  os << "t,a2,norm_branch,norm_cone,ratio,bound_upper_branch,bound_lower_cone,bound_upper_cone,"
        "bound_ratio,bound_ratio_asymptote,margin_branch,margin_lower_cone,margin_upper_cone,margin_ratio,"
        "x_cut,failed\n";
  for (const auto& r : rows) {
    os << r.t << ',' << r.a2 << ',' << r.norm_branch << ',' << r.norm_cone << ',' << r.ratio << ','
       << r.bound_upper_branch << ',' << r.bound_lower_cone << ',' << r.bound_upper_cone << ',' << r.bound_ratio
       << ',' << r.bound_ratio_asymptote << ',' << r.margin_branch() << ',' << r.margin_lower_cone() << ','
       << r.margin_upper_cone() << ',' << r.margin_ratio() << ',' << r.x_cut << ',' << (r.failed ? 1 : 0)
       << '\n';
  }
}

DecayFit decay_fit(std::span<const std::pair<double, double>> samples) {
  if (samples.size() < 3) throw std::invalid_argument("decay_fit needs at least 3 samples");
  double sx = 0, sy = 0;
  for (const auto& [t, v] : samples) {
    if (!(t > 0.0) || !(v > 0.0)) throw std::invalid_argument("decay_fit needs positive t and values");
    sx += std::log(t);
    sy += std::log(v);
  }
  const double n = static_cast<double>(samples.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (const auto& [t, v] : samples) {
    const double dx = std::log(t) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(v) - my);
  }
  if (sxx <= 1e-300) throw std::invalid_argument("decay_fit is degenerate: no spread in log t");
  DecayFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0;
  for (const auto& [t, v] : samples) {
    const double e = std::log(v) - (fit.intercept + fit.slope * std::log(t));
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

}  // namespace kgstar
