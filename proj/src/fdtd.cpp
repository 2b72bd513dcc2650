#include "kgstar/fdtd.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace kgstar {

FdtdSolver::FdtdSolver(const SampledBranchFunction& u0, const BranchPotentials& pots, const FdtdParams& params)
    : pots_(pots), params_(params) {
  pots.validate();
  const double dx = params.dx, dt = params.dt;
  if (!(dx > 0.0) || !(dt > 0.0) || !(params.length > 0.0))
    throw std::invalid_argument("FDTD step sizes and length must be positive");
  // leapfrog stability for -∂ₓ² + a: dt²(4/dx² + a_max) <= 4
  if (dt > dx || dt * dt * (4.0 / (dx * dx) + pots.a2) > 4.0)
    throw std::invalid_argument("FDTD CFL condition violated (dt=" + std::to_string(dt) +
                                ", dx=" + std::to_string(dx) + ")");
  if (std::abs(u0.h - dx) > 1e-12 * dx) throw std::invalid_argument("initial samples must use spacing dx");
  n_ = static_cast<std::size_t>(std::llround(params.length / dx)) + 1;
  if (u0.v1.size() < n_ || u0.v2.size() < n_)
    throw std::invalid_argument("initial samples do not cover the FDTD domain (domain too short for data)");
  curr1_.assign(u0.v1.begin(), u0.v1.begin() + static_cast<std::ptrdiff_t>(n_));
  curr2_.assign(u0.v2.begin(), u0.v2.begin() + static_cast<std::ptrdiff_t>(n_));
  // shared vertex and Dirichlet ends
  const cplx vertex = 0.5 * (curr1_[0] + curr2_[0]);
  curr1_[0] = curr2_[0] = vertex;
  curr1_[n_ - 1] = curr2_[n_ - 1] = 0.0;
  prev1_ = curr1_;
  prev2_ = curr2_;
  k1_.resize(n_);
  k2_.resize(n_);
  initial_energy_ = discrete_energy();
}

void FdtdSolver::apply_k(const std::vector<cplx>& u1, const std::vector<cplx>& u2, std::vector<cplx>& k1,
                         std::vector<cplx>& k2) const {
  const double inv = 1.0 / (params_.dx * params_.dx);
  const std::size_t last = n_ - 1;
  k1[0] = k2[0] = (2.0 * u1[0] - u1[1] - u2[1]) * inv + 0.5 * (pots_.a1 + pots_.a2) * u1[0];
  for (std::size_t i = 1; i < last; ++i) {
    k1[i] = (2.0 * u1[i] - u1[i + 1] - u1[i - 1]) * inv + pots_.a1 * u1[i];
    k2[i] = (2.0 * u2[i] - u2[i + 1] - u2[i - 1]) * inv + pots_.a2 * u2[i];
  }
  k1[last] = k2[last] = 0.0;
}

void FdtdSolver::step() {
  const double dt2 = params_.dt * params_.dt;
  apply_k(curr1_, curr2_, k1_, k2_);
  // first step from rest: u¹ = u⁰ - ½dt² K u⁰ (u⁻¹ = u¹ by time symmetry)
  const double c_prev = steps_ == 0 ? 0.0 : 1.0;
  const double c_curr = steps_ == 0 ? 1.0 : 2.0;
  const double c_k = steps_ == 0 ? 0.5 * dt2 : dt2;
  for (std::size_t i = 0; i < n_; ++i) {
    prev1_[i] = c_curr * curr1_[i] - c_prev * prev1_[i] - c_k * k1_[i];
    prev2_[i] = c_curr * curr2_[i] - c_prev * prev2_[i] - c_k * k2_[i];
  }
  prev1_[n_ - 1] = prev2_[n_ - 1] = 0.0;
  prev2_[0] = prev1_[0];
  std::swap(prev1_, curr1_);
  std::swap(prev2_, curr2_);
  ++steps_;
  if (steps_ % 1000 == 0) {
    const double e = discrete_energy();
    if (!std::isfinite(e) || std::abs(e - initial_energy_) > 1e-2 * std::abs(initial_energy_) + 1e-300)
      throw std::runtime_error("FDTD instability detected at step " + std::to_string(steps_));
  }
}

void FdtdSolver::advance_to(double t) {
  const long target = std::lround(t / params_.dt);
  while (steps_ < target) step();
}

double FdtdSolver::discrete_energy() const {
  std::vector<cplx> k1(n_), k2(n_);
  apply_k(prev1_, prev2_, k1, k2);
  const double dx = params_.dx, dt = params_.dt;
  double kinetic = 0.0, potential = 0.0;
  // vertex counted once; branch arrays share index 0
  for (std::size_t i = 0; i < n_; ++i) {
    kinetic += std::norm((curr1_[i] - prev1_[i]) / dt);
    potential += (std::conj(curr1_[i]) * k1[i]).real();
    if (i == 0) continue;
    kinetic += std::norm((curr2_[i] - prev2_[i]) / dt);
    potential += (std::conj(curr2_[i]) * k2[i]).real();
  }
  return 0.5 * dx * (kinetic + potential);
}

void FdtdSolver::write_snapshot(std::ostream& os, std::size_t stride, bool header) const {
  if (header) os << "t,branch,x,re,im\n";
  os.precision(12);
  const double t = time();
  for (Branch k : {Branch::one, Branch::two}) {
    const auto v = branch(k);
    for (std::size_t i = 0; i < v.size(); i += std::max<std::size_t>(1, stride))
      os << t << ',' << static_cast<int>(k) << ',' << params_.dx * static_cast<double>(i) << ',' << v[i].real()
         << ',' << v[i].imag() << '\n';
  }
}

ComparisonStats compare(const FdtdSolver& solver, const std::function<cplx(double)>& spectral, double x_end,
                        double spacing) {
  const double dx = solver.params().dx;
  const long stride = std::lround(spacing / dx);
  if (stride < 1 || std::abs(stride * dx - spacing) > 1e-9 * spacing)
    throw std::invalid_argument("comparison spacing must be a multiple of dx");
  const auto v = solver.branch(Branch::two);
  ComparisonStats st;
  st.t = solver.time();
  double num = 0, den = 0, max_diff = 0, max_ref = 0;
  for (std::size_t i = 0; i < v.size() && dx * static_cast<double>(i) <= x_end + 1e-12;
       i += static_cast<std::size_t>(stride)) {
    const cplx ref = spectral(dx * static_cast<double>(i));
    const double d = std::abs(v[i] - ref);
    num += d * d;
    den += std::norm(ref);
    max_diff = std::max(max_diff, d);
    max_ref = std::max(max_ref, std::abs(ref));
    ++st.samples;
  }
  st.rel_l2 = den > 0 ? std::sqrt(num / den) : std::sqrt(num);
  st.max_rel = max_ref > 0 ? max_diff / max_ref : max_diff;
  return st;
}

}  // namespace kgstar
