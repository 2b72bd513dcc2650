#include "kgstar/transform.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <memory>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "kgstar/solution.hpp"

namespace kgstar {

BranchFunction BranchFunction::zero(double x_max) {
  auto z = [](double) { return cplx{}; };
  return {z, z, x_max};
}

SampledBranchFunction sample(const BranchFunction& f, double h, double x_end) {
  if (!(h > 0.0)) throw std::invalid_argument("sample spacing must be positive");
  const auto n = static_cast<std::size_t>(std::floor(x_end / h + 1e-9)) + 1;
  SampledBranchFunction out;
  out.h = h;
  out.v1.resize(n);
  out.v2.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.v1[i] = f.f1(out.x(i));
    out.v2[i] = f.f2(out.x(i));
  }
  return out;
}

// ---------------------------------------------------------------- CSV

namespace {

void write_rows(std::ostream& os, int branch, std::span<const double> coord, std::span<const cplx> v) {
  for (std::size_t i = 0; i < v.size(); ++i)
    os << branch << ',' << coord[i] << ',' << v[i].real() << ',' << v[i].imag() << '\n';
}

struct CsvRow {
  int branch;
  double coord;
  cplx value;
};

std::vector<CsvRow> read_rows(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("branch,coordinate,re,im", 0) != 0)
    throw std::runtime_error("expected CSV header 'branch,coordinate,re,im'");
  std::vector<CsvRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    CsvRow r{};
    double re = 0, im = 0;
    char c1 = 0, c2 = 0, c3 = 0;
    if (!(ls >> r.branch >> c1 >> r.coord >> c2 >> re >> c3 >> im) || c1 != ',' || c2 != ',' || c3 != ',')
      throw std::runtime_error("malformed CSV row: " + line);
    if (r.branch != 1 && r.branch != 2) throw std::runtime_error("branch index must be 1 or 2: " + line);
    r.value = {re, im};
    rows.push_back(r);
  }
  return rows;
}

}  // namespace

void write_csv(std::ostream& os, const SampledBranchFunction& f) {
  os.precision(17);
  os << "branch,coordinate,re,im\n";
  std::vector<double> xs(std::max(f.v1.size(), f.v2.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = f.x(i);
  write_rows(os, 1, xs, f.v1);
  write_rows(os, 2, xs, f.v2);
}

SampledBranchFunction read_branch_csv(std::istream& is) {
  SampledBranchFunction f;
  std::vector<double> x1;
  for (const CsvRow& r : read_rows(is)) {
    if (r.branch == 1) {
      f.v1.push_back(r.value);
      x1.push_back(r.coord);
    } else {
      f.v2.push_back(r.value);
    }
  }
  if (x1.size() < 2) throw std::runtime_error("sampled branch function needs at least two points");
  f.h = x1[1] - x1[0];
  if (!(f.h > 0.0)) throw std::runtime_error("sample grid must be uniform with positive spacing");
  return f;
}

void write_csv(std::ostream& os, const SampledSpectralPair& g) {
  os.precision(17);
  os << "branch,coordinate,re,im\n";
  write_rows(os, 1, g.lambda, g.g1);
  write_rows(os, 2, g.lambda, g.g2);
}

SampledSpectralPair read_spectral_csv(std::istream& is) {
  SampledSpectralPair g;
  for (const CsvRow& r : read_rows(is)) {
    if (r.branch == 1) {
      g.lambda.push_back(r.coord);
      g.g1.push_back(r.value);
    } else {
      g.g2.push_back(r.value);
    }
  }
  if (g.g1.size() != g.g2.size()) throw std::runtime_error("spectral CSV branches differ in length");
  return g;
}

// ---------------------------------------------------------------- discretization

BranchDiscretization::BranchDiscretization(const BranchFunction& f, double panel_width, int order) {
  if (!(f.x_max > 0.0) || !(panel_width > 0.0)) throw std::invalid_argument("invalid discretization extent");
  const auto panels = static_cast<std::size_t>(std::ceil(f.x_max / panel_width - 1e-12));
  width_ = f.x_max / static_cast<double>(panels);
  const auto& rule = quad::gauss_legendre(order);
  x_.reserve(panels * order);
  w_.reserve(panels * order);
  for (std::size_t p = 0; p < panels; ++p) {
    const double c = (static_cast<double>(p) + 0.5) * width_;
    for (int i = 0; i < order; ++i) {
      x_.push_back(c + 0.5 * width_ * rule.nodes[i]);
      w_.push_back(0.5 * width_ * rule.weights[i]);
    }
  }
  f1_.resize(x_.size());
  f2_.resize(x_.size());
  for (std::size_t i = 0; i < x_.size(); ++i) {
    f1_[i] = f.f1(x_[i]);
    f2_[i] = f.f2(x_[i]);
  }
}

cplx BranchDiscretization::transform(Branch k, double lambda, const BranchPotentials& pots) const {
  const cplx xk = xi(k, lambda, pots);
  const cplx xo = xi(other(k), lambda, pots);
  // g_k lives on [a_k, ∞)
  if (xk.imag() != 0.0) return {};
  const double kr = xk.real();
  const std::vector<cplx>& own = k == Branch::one ? f1_ : f2_;
  const std::vector<cplx>& oth = k == Branch::one ? f2_ : f1_;
  const bool at_branch_point = kr == 0.0;
  // conj(F^{-,k}) on branch k: cos(ξx) + i conj(s) sin(ξx); at ξ_k = 0 the limit 1 - i conj(ξ_o) x
  const cplx s_conj = at_branch_point ? cplx{} : std::conj(-xo / xk);
  const bool other_real = xo.imag() == 0.0;
  const double kappa = -xo.imag();  // ξ_o = -iκ below the other threshold
  cplx acc{};
  for (std::size_t i = 0; i < x_.size(); ++i) {
    const double x = x_[i];
    cplx own_kernel;
    if (at_branch_point) {
      own_kernel = 1.0 + cplx(0.0, 1.0) * std::conj(xo) * x;
    } else {
      own_kernel = std::cos(kr * x) + cplx(0.0, 1.0) * s_conj * std::sin(kr * x);
    }
    // conj(exp(-iξ_o x))
    const cplx other_kernel = other_real ? std::polar(1.0, xo.real() * x) : cplx(std::exp(-kappa * x), 0.0);
    acc += w_[i] * (own[i] * own_kernel + oth[i] * other_kernel);
  }
  return acc;
}

double BranchDiscretization::h_norm_squared() const {
  double acc = 0.0;
  for (std::size_t i = 0; i < x_.size(); ++i) acc += w_[i] * (std::norm(f1_[i]) + std::norm(f2_[i]));
  return acc;
}

namespace {

constexpr int kOrder = 32;

// About 6π of phase per panel for f oscillating no faster than the kernel.
double initial_width(double lambda_max, const BranchPotentials& pots) {
  const double kappa = std::sqrt(std::max(0.0, lambda_max - pots.a1));
  return 6.0 * std::numbers::pi / (2.0 * kappa + 1.0);
}

// Halve the panel width until two levels agree at every probe λ; returns the finer level.
std::shared_ptr<BranchDiscretization> refine(const BranchFunction& f, std::span<const double> probes,
                                             double lambda_max, const BranchPotentials& pots,
                                             const QuadratureConfig& quad) {
  double width = initial_width(lambda_max, pots);
  auto coarse = std::make_shared<BranchDiscretization>(f, width, kOrder);
  double worst_diff = 0.0, worst_lambda = 0.0;
  while (true) {
    width *= 0.5;
    if (f.x_max / width > quad.max_panels)
      throw QuadratureError("forward transform: discretization exceeds panel budget (worst difference " +
                                std::to_string(worst_diff) + ")",
                            worst_diff, worst_lambda);
    auto fine = std::make_shared<BranchDiscretization>(f, width, kOrder);
    worst_diff = 0.0;
    double scale = 0.0;
    for (double lam : probes) {
      for (Branch k : {Branch::one, Branch::two}) {
        const cplx a = coarse->transform(k, lam, pots);
        const cplx b = fine->transform(k, lam, pots);
        scale = std::max(scale, std::abs(b));
        if (std::abs(a - b) > worst_diff) {
          worst_diff = std::abs(a - b);
          worst_lambda = lam;
        }
      }
    }
    if (worst_diff <= std::max(quad.abs_tol, quad.rel_tol * scale)) return fine;
    coarse = fine;
  }
}

}  // namespace

SampledSpectralPair forward_transform(const BranchFunction& f, std::span<const double> lambda_grid,
                                      const BranchPotentials& pots, const QuadratureConfig& quad) {
  pots.validate();
  quad.validate();
  SampledSpectralPair out;
  out.lambda.assign(lambda_grid.begin(), lambda_grid.end());
  if (lambda_grid.empty()) return out;
  const double lmax = *std::max_element(lambda_grid.begin(), lambda_grid.end());
  auto disc = refine(f, lambda_grid, lmax, pots, quad);
  for (double lam : lambda_grid) {
    out.g1.push_back(disc->transform(Branch::one, lam, pots));
    out.g2.push_back(disc->transform(Branch::two, lam, pots));
  }
  return out;
}

SpectralPair forward_transform_callable(const BranchFunction& f, double lambda_max, const BranchPotentials& pots,
                                        const QuadratureConfig& quad) {
  pots.validate();
  quad.validate();
  if (!(lambda_max > pots.a1)) throw std::invalid_argument("lambda_max must exceed a1");
  // probes: Gauss nodes on each channel's range plus the top of the range
  std::vector<double> probes = gauss_lambda_grid(pots.a1, lambda_max, 24);
  if (lambda_max > pots.a2) {
    const auto upper = gauss_lambda_grid(pots.a2, lambda_max, 24);
    probes.insert(probes.end(), upper.begin(), upper.end());
  }
  probes.push_back(lambda_max);
  std::shared_ptr<const BranchDiscretization> disc = refine(f, probes, lambda_max, pots, quad);
  SpectralPair g;
  g.lambda_max = lambda_max;
  g.g1 = [disc, pots](double lam) { return disc->transform(Branch::one, lam, pots); };
  g.g2 = [disc, pots](double lam) { return disc->transform(Branch::two, lam, pots); };
  return g;
}

double q_norm(const SpectralPair& g, const BranchPotentials& pots, const QuadratureConfig& quad, double cq,
              std::span<const double> breaks) {
  pots.validate();
  quad.validate();
  QuadratureConfig inner = quad;
  inner.abs_tol = quad.abs_tol * quad.abs_tol;
  double total = 0.0;
  for (Branch k : {Branch::one, Branch::two}) {
    const double ak = k == Branch::one ? pots.a1 : pots.a2;
    if (!(g.lambda_max > ak)) continue;
    // λ = a_k + ξ² removes the square-root behaviour of q_k at the threshold
    std::vector<double> xi_breaks;
    if (k == Branch::one && pots.a2 > pots.a1) xi_breaks.push_back(std::sqrt(pots.a2 - pots.a1));
    for (double lb : breaks)
      if (lb > ak) xi_breaks.push_back(std::sqrt(lb - ak));
    auto integrand = [&](double z) {
      const double lam = ak + z * z;
      return q(k, lam, pots, cq) * std::norm(g(k, lam)) * 2.0 * z;
    };
    const QuadResult r = quad::integrate(integrand, 0.0, std::sqrt(g.lambda_max - ak), inner, xi_breaks);
    if (!r.converged)
      throw QuadratureError("q_norm: tolerance not met on branch " + std::to_string(static_cast<int>(k)), r.error,
                            g.lambda_max);
    total += r.value.real();
  }
  return std::sqrt(std::max(0.0, total));
}

double h_norm(const BranchFunction& f, const QuadratureConfig& quad) {
  quad.validate();
  QuadratureConfig inner = quad;
  inner.abs_tol = quad.abs_tol * quad.abs_tol;
  double total = 0.0;
  for (Branch k : {Branch::one, Branch::two}) {
    auto integrand = [&](double x) { return std::norm(f(k, x)); };
    const QuadResult r = quad::integrate(integrand, 0.0, f.x_max, inner);
    if (!r.converged) throw QuadratureError("h_norm: tolerance not met", r.error, f.x_max);
    total += r.value.real();
  }
  return std::sqrt(total);
}

// ---------------------------------------------------------------- reconstruction

cplx reconstruct_at(Branch k, double x, const SpectralProfile& profile, const BranchPotentials& pots,
                    const QuadratureConfig& quad, double cq) {
  check_profile_matches(profile, pots);
  if (x < 0.0) throw std::invalid_argument("reconstruct_at needs x >= 0");
  if (profile.is_zero()) return {};
  const auto& b = profile.band();
  const double gap = pots.a2 - pots.a1;
  const std::array<double, 2> knots{b.alpha_prime, b.beta_prime};
  QuadResult r;
  if (k == Branch::two) {
    // F^{-,1}_{λ,2}(x) = exp(-iξ₂x), ξ₂ = √μ
    auto f = [&](double mu) {
      return std::polar(q1_above_threshold(mu, pots, cq) * profile.psi(mu), -std::sqrt(mu) * x);
    };
    auto rate = [&](double mu) { return x / (2.0 * std::sqrt(mu)); };
    r = quad::integrate_oscillatory(f, rate, b.alpha, b.beta, quad, knots);
  } else {
    // F^{-,1}_{λ,1}(x) = cos(ξ₁x) - i s₁ sin(ξ₁x), s₁ = -ξ₂/ξ₁
    auto f = [&](double mu) {
      const double x1 = std::sqrt(gap + mu);
      const double s1 = -std::sqrt(mu) / x1;
      const double w = q1_above_threshold(mu, pots, cq) * profile.psi(mu);
      return w * cplx(std::cos(x1 * x), -s1 * std::sin(x1 * x));
    };
    auto rate = [&](double mu) { return x / (2.0 * std::sqrt(gap + mu)); };
    r = quad::integrate_oscillatory(f, rate, b.alpha, b.beta, quad, knots);
  }
  if (!r.converged) throw QuadratureError("reconstruct_at: tolerance not met", r.error, x);
  return r.value;
}

InitialDataSynthesis::InitialDataSynthesis(const SpectralProfile& profile, const BranchPotentials& pots,
                                           double x_cap, double cq)
    : pots_(pots), cq_(cq), x_cap_(x_cap) {
  check_profile_matches(profile, pots);
  if (!(x_cap > 0.0)) throw std::invalid_argument("synthesis needs x_cap > 0");
  if (profile.is_zero()) return;
  build(profile, x_cap, 1.5);
  InitialDataSynthesis coarse(*this);
  coarse.build(profile, x_cap, 1.0);
  double scale = 0.0;
  for (double w : w_) scale += std::abs(w);
  for (double x : {0.5 * x_cap, x_cap}) {
    for (Branch k : {Branch::one, Branch::two}) {
      const double d = std::abs((*this)(k, x) - coarse(k, x));
      if (d > 1e-12 * scale) throw QuadratureError("initial-data synthesis not resolved at x_cap", d, x);
    }
  }
}

void InitialDataSynthesis::build(const SpectralProfile& profile, double x_cap, double oversample) {
  const auto& b = profile.band();
  const double gap = pots_.a2 - pots_.a1;
  const std::array<double, 4> edges{b.alpha, b.alpha_prime, b.beta_prime, b.beta};
  mu_.clear();
  w_.clear();
  xi1_.clear();
  s1_.clear();
  xi2_.clear();
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double m0 = edges[p], m1 = edges[p + 1];
    // phase swing of the faster kernel across the piece at x_cap
    const double swing = x_cap * std::max(std::sqrt(gap + m1) - std::sqrt(gap + m0), std::sqrt(m1) - std::sqrt(m0));
    const int n = static_cast<int>(std::ceil(oversample * (0.5 * swing + 32.0)));
    const auto& rule = quad::gauss_legendre(n);
    for (int i = 0; i < n; ++i) {
      const double mu = 0.5 * (m0 + m1) + 0.5 * (m1 - m0) * rule.nodes[i];
      const double x1 = std::sqrt(gap + mu), x2 = std::sqrt(mu);
      mu_.push_back(mu);
      w_.push_back(0.5 * (m1 - m0) * rule.weights[i] * q1_above_threshold(mu, pots_, cq_) * profile.psi(mu));
      xi1_.push_back(x1);
      s1_.push_back(-x2 / x1);
      xi2_.push_back(x2);
    }
  }
}

cplx InitialDataSynthesis::operator()(Branch k, double x) const {
  if (x < 0.0 || x > x_cap_ * (1.0 + 1e-12)) throw std::domain_error("synthesis evaluated outside [0, x_cap]");
  double re = 0.0, im = 0.0;
  if (k == Branch::one) {
    for (std::size_t i = 0; i < w_.size(); ++i) {
      re += w_[i] * std::cos(xi1_[i] * x);
      im -= w_[i] * s1_[i] * std::sin(xi1_[i] * x);
    }
  } else {
    for (std::size_t i = 0; i < w_.size(); ++i) {
      re += w_[i] * std::cos(xi2_[i] * x);
      im -= w_[i] * std::sin(xi2_[i] * x);
    }
  }
  return {re, im};
}

namespace {

double mass_on(const BranchFunction& f, double lo, double hi, double kappa, const QuadratureConfig& quad) {
  double total = 0.0;
  const double width = 2.0 * std::numbers::pi / (kappa + 1.0);
  const auto panels = static_cast<std::size_t>(std::ceil((hi - lo) / width));
  const double w = (hi - lo) / static_cast<double>(panels);
  const auto& rule = quad::gauss_legendre(kOrder);
  for (std::size_t p = 0; p < panels; ++p) {
    const double c = lo + (static_cast<double>(p) + 0.5) * w;
    for (int i = 0; i < kOrder; ++i) {
      const double x = c + 0.5 * w * rule.nodes[i];
      total += 0.5 * w * rule.weights[i] * (std::norm(f.f1(x)) + std::norm(f.f2(x)));
    }
  }
  (void)quad;
  return total;
}

}  // namespace

namespace {

BranchFunction synthesized(std::shared_ptr<const InitialDataSynthesis> syn, const SpectralProfile& profile,
                           const BranchPotentials& pots, const QuadratureConfig& quad, double cq) {
  // beyond x_cap fall back to the adaptive pointwise integral
  auto make = [=](Branch k) -> BranchCallable {
    return [=](double x) {
      return x <= syn->x_cap() ? (*syn)(k, x) : reconstruct_at(k, x, profile, pots, quad, cq);
    };
  };
  return {make(Branch::one), make(Branch::two), syn->x_cap()};
}

}  // namespace

BranchFunction reconstruct_initial(const SpectralProfile& profile, const BranchPotentials& pots,
                                   const QuadratureConfig& quad, double cq, const ReconstructOptions& opts) {
  check_profile_matches(profile, pots);
  quad.validate();
  if (profile.is_zero()) {
    BranchFunction z = BranchFunction::zero(opts.x_start);
    return z;
  }
  const double kappa = std::sqrt(pots.a2 - pots.a1 + profile.band().beta);
  double x = opts.x_start;
  auto syn = std::make_shared<const InitialDataSynthesis>(profile, pots, 2.0 * x, cq);
  double inside = mass_on(synthesized(syn, profile, pots, quad, cq), 0.0, x, kappa, quad);
  while (true) {
    if (syn->x_cap() < 2.0 * x) syn = std::make_shared<const InitialDataSynthesis>(profile, pots, 2.0 * x, cq);
    const double tail = mass_on(synthesized(syn, profile, pots, quad, cq), x, 2.0 * x, kappa, quad);
    if (tail <= opts.tail_tol * inside) break;
    inside += tail;
    x *= 2.0;
    if (x > opts.x_limit)
      throw QuadratureError("reconstruct_initial: tail mass still significant at x_limit", tail / inside, x);
  }
  BranchFunction u0 = synthesized(syn, profile, pots, quad, cq);
  u0.x_max = x;
  return u0;
}

SampledBranchFunction reconstruct_initial_sampled(const SpectralProfile& profile, const BranchPotentials& pots,
                                                  double h, double x_end, const QuadratureConfig& quad,
                                                  double cq) {
  check_profile_matches(profile, pots);
  if (profile.is_zero()) return sample(BranchFunction::zero(x_end), h, x_end);
  auto syn = std::make_shared<const InitialDataSynthesis>(profile, pots, x_end, cq);
  return sample(synthesized(syn, profile, pots, quad, cq), h, x_end);
}

constexpr double kRoundTripResolution = 1e-6;

RoundTripReport round_trip(const SpectralProfile& profile, const BranchPotentials& pots,
                           const QuadratureConfig& quad, double cq, const ReconstructOptions& opts) {
  check_profile_matches(profile, pots);
  const auto& b = profile.band();
  const double lambda_max = pots.a2 + 2.0 * b.beta;
  const BranchFunction u0 = reconstruct_initial(profile, pots, quad, cq, opts);
  const SpectralPair v = forward_transform_callable(u0, lambda_max, pots, quad);

  const double lo = pots.a2 + b.alpha, hi = pots.a2 + b.beta;
  const std::array<double, 5> breaks{pots.a2, lo, pots.a2 + b.alpha_prime, pots.a2 + b.beta_prime, hi};
  SpectralPair target;
  target.lambda_max = lambda_max;
  target.g1 = [&](double lam) { return cplx(profile.psi_tilde(lam)); };
  target.g2 = [](double) { return cplx{}; };
  SpectralPair residual;
  residual.lambda_max = lambda_max;
  residual.g1 = [&](double lam) { return v.g1(lam) - cplx(profile.psi_tilde(lam)); };
  residual.g2 = v.g2;
  SpectralPair outside;
  outside.lambda_max = lambda_max;
  outside.g1 = [&](double lam) { return (lam >= lo && lam <= hi) ? cplx{} : v.g1(lam); };
  outside.g2 = [&](double lam) { return (lam >= lo && lam <= hi) ? cplx{} : v.g2(lam); };

  RoundTripReport rep;
  rep.x_max = u0.x_max;
  rep.profile_norm = q_norm(target, pots, quad, cq, breaks);
  if (rep.profile_norm == 0.0) return rep;
  // residual and leakage only need absolute accuracy well below the pass bar
  QuadratureConfig coarse = quad;
  coarse.abs_tol = kRoundTripResolution * rep.profile_norm;
  coarse.rel_tol = 1e-2;
  rep.residual = q_norm(residual, pots, coarse, cq, breaks) / rep.profile_norm;
  rep.out_of_band = q_norm(outside, pots, coarse, cq, breaks) / rep.profile_norm;
  return rep;
}

std::vector<double> gauss_lambda_grid(double lo, double hi, int n) {
  const auto& rule = quad::gauss_legendre(n);
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = 0.5 * (lo + hi) + 0.5 * (hi - lo) * rule.nodes[i];
  return out;
}

}  // namespace kgstar
