#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace kgstar {

using cplx = std::complex<double>;

/// Tolerances and oscillation resolution shared by every integral in the library.
struct QuadratureConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_panels = 200000;
  /// Minimum number of quadrature nodes per local period of an oscillatory phase.
  int points_per_period = 16;

  void validate() const;
};

struct QuadResult {
  cplx value{};
  double error = 0.0;
  int panels = 0;
  bool converged = true;
};

/// Raised when an integral cannot meet its tolerance within the panel budget.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double achieved, double where)
      : std::runtime_error(what), achieved_(achieved), where_(where) {}
  double achieved() const { return achieved_; }
  /// Location (λ, x or t depending on the caller) of the worst offender.
  double where() const { return where_; }

 private:
  double achieved_;
  double where_;
};

namespace quad {

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule, nodes ascending. Cached per n.
const GaussLegendre& gauss_legendre(int n);

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b;
  cplx value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

// QUADPACK error heuristic applied to the complex difference K15 - G7.
template <class F>
Panel gk15(F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const cplx fc = f(c);
  cplx resk = fc * kWgk[7];
  cplx resg = fc * kWg[3];
  std::array<cplx, 7> f1{}, f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    f1[j] = f(c - dx);
    f2[j] = f(c + dx);
    resk += kWgk[j] * (f1[j] + f2[j]);
    if (j % 2 == 1) resg += kWg[j / 2] * (f1[j] + f2[j]);
  }
  const cplx mean = 0.5 * resk;
  double resasc = kWgk[7] * std::abs(fc - mean);
  double resabs = kWgk[7] * std::abs(fc);
  for (int j = 0; j < 7; ++j) {
    resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
    resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
  }
  const double ah = std::abs(h);
  resasc *= ah;
  resabs *= ah;
  double err = std::abs((resk - resg) * h);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50 * eps)) err = std::max(50 * eps * resabs, err);
  return {a, b, resk * h, err};
}

// Global adaptive bisection on an initial partition. Panels are summed in
// left-to-right order so the result does not depend on heap internals.
template <class F>
QuadResult adapt(F& f, std::span<const double> edges, const QuadratureConfig& cfg) {
  std::priority_queue<Panel> heap;
  cplx total{};
  double err = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (edges[i + 1] == edges[i]) continue;
    Panel p = gk15(f, edges[i], edges[i + 1]);
    total += p.value;
    err += p.error;
    heap.push(p);
  }
  int panels = static_cast<int>(heap.size());
  auto done = [&] { return err <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total)); };
  while (!heap.empty() && !done() && panels < cfg.max_panels) {
    Panel worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) break;  // cannot split further
    heap.pop();
    Panel left = gk15(f, worst.a, mid);
    Panel right = gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++panels;
  }
  std::vector<Panel> all;
  all.reserve(heap.size());
  while (!heap.empty()) {
    all.push_back(heap.top());
    heap.pop();
  }
  std::sort(all.begin(), all.end(), [](const Panel& l, const Panel& r) { return l.a < r.a; });
  QuadResult res;
  res.value = {};
  res.error = 0.0;
  for (const Panel& p : all) {
    res.value += p.value;
    res.error += p.error;
  }
  res.panels = panels;
  res.converged = res.error <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(res.value));
  return res;
}

template <class F>
auto as_complex(F& f) {
  return [&f](double x) -> cplx { return cplx(f(x)); };
}

}  // namespace detail

/// Adaptive Gauss-Kronrod (7/15) integral of f over [a, b]. Breakpoints inside
/// (a, b) seed the initial partition. Does not throw; check `converged`.
template <class F>
QuadResult integrate(F&& f, double a, double b, const QuadratureConfig& cfg,
                     std::span<const double> breakpoints = {}) {
  if (a == b) return {};
  const double lo = std::min(a, b), hi = std::max(a, b);
  std::vector<double> edges{lo};
  for (double bp : breakpoints)
    if (bp > lo && bp < hi) edges.push_back(bp);
  edges.push_back(hi);
  std::sort(edges.begin(), edges.end());
  auto g = detail::as_complex(f);
  QuadResult r = detail::adapt(g, edges, cfg);
  if (a > b) r.value = -r.value;
  return r;
}

/// Phase-adaptive integral of f over [a, b]. `phase_rate(x)` bounds |dθ/dx| of
/// the integrand's oscillatory phase; the initial partition places at least
/// cfg.points_per_period Kronrod nodes in every local period, after which the
/// global adaptive refinement takes over.
template <class F, class R>
QuadResult integrate_oscillatory(F&& f, R&& phase_rate, double a, double b,
                                 const QuadratureConfig& cfg,
                                 std::span<const double> breakpoints = {}) {
  if (a == b) return {};
  const double lo = std::min(a, b), hi = std::max(a, b);
  std::vector<double> stops{hi};
  for (double bp : breakpoints)
    if (bp > lo && bp < hi) stops.push_back(bp);
  std::sort(stops.begin(), stops.end());

  constexpr double kNodes = 15.0;
  const double span_per_rad = kNodes / (2.0 * std::numbers::pi * cfg.points_per_period);
  std::vector<double> edges{lo};
  double x = lo;
  for (double stop : stops) {
    while (x < stop) {
      double rate = std::abs(phase_rate(x));
      double h = rate > 0 ? span_per_rad / rate : stop - x;
      // tighten once using the rate at the tentative right end
      if (x + h < stop) {
        const double r2 = std::abs(phase_rate(x + h));
        if (r2 > rate) h = span_per_rad / r2;
      }
      double next = std::min(stop, x + h);
      // avoid a sliver at the end of a segment
      if (stop - next < 0.25 * h) next = stop;
      edges.push_back(next);
      x = next;
      if (static_cast<int>(edges.size()) > cfg.max_panels)
        throw QuadratureError("oscillatory partition exceeds panel budget", 0.0, x);
    }
  }
  auto g = detail::as_complex(f);
  QuadResult r = detail::adapt(g, edges, cfg);
  if (a > b) r.value = -r.value;
  return r;
}

}  // namespace quad
}  // namespace kgstar
