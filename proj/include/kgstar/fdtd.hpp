#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "kgstar/spectral_core.hpp"
#include "kgstar/transform.hpp"

namespace kgstar {

struct FdtdParams {
  double dx = 0.01;
  double dt = 0.005;
  double length = 160.0;  ///< per branch; Dirichlet zero at x = length
};

/// Leapfrog solver for u_tt = u_xx - a_k u on two truncated half-axes glued at
/// a shared vertex unknown with Kirchhoff coupling. Ghost points on each branch
/// reduce the vertex row to
///   u₀'' = (u₁[1] + u₂[1] - 2u₀)/dx² - ½(a1 + a2) u₀,
/// which keeps the scheme second order and the discrete energy exact.
class FdtdSolver {
 public:
  /// `u0` must be sampled with spacing params.dx and cover [0, params.length].
  /// Throws std::invalid_argument on a CFL violation or a too-short sample.
  FdtdSolver(const SampledBranchFunction& u0, const BranchPotentials& pots, const FdtdParams& params);

  void step();
  /// Steps until time() is the multiple of dt nearest to t.
  void advance_to(double t);

  double time() const { return static_cast<double>(steps_) * params_.dt; }
  long steps() const { return steps_; }
  const FdtdParams& params() const { return params_; }

  /// Staggered leapfrog energy ½(‖(uⁿ⁺¹ - uⁿ)/dt‖² + Re⟨uⁿ⁺¹, K uⁿ⟩), with
  /// K the discrete -∂ₓ² + a_k. Before the first step this is ½⟨u₀, K u₀⟩.
  double discrete_energy() const;

  /// Current values on branch k; index 0 is the vertex, index i is x = i·dx.
  std::span<const cplx> branch(Branch k) const { return k == Branch::one ? curr1_ : curr2_; }
  cplx at(Branch k, std::size_t i) const { return branch(k)[i]; }

  /// CSV rows (t, branch, x, re, im) every `stride` nodes.
  void write_snapshot(std::ostream& os, std::size_t stride = 1, bool header = true) const;

 private:
  // (K u)_i for both branches; index 0 is the shared vertex.
  void apply_k(const std::vector<cplx>& u1, const std::vector<cplx>& u2, std::vector<cplx>& k1,
               std::vector<cplx>& k2) const;

  BranchPotentials pots_;
  FdtdParams params_;
  std::size_t n_;  // nodes per branch including vertex and the Dirichlet end
  std::vector<cplx> prev1_, prev2_, curr1_, curr2_;
  std::vector<cplx> k1_, k2_;
  long steps_ = 0;
  double initial_energy_ = 0.0;
};

struct ComparisonStats {
  double t = 0.0;
  double rel_l2 = 0.0;   ///< ‖fdtd - spectral‖ / ‖spectral‖ over the samples
  double max_rel = 0.0;  ///< max |fdtd - spectral| / max |spectral|
  std::size_t samples = 0;
};

/// Compares branch-2 values of the solver at its current time against
/// `spectral(x)` on x = j·spacing ≤ x_end; spacing must be a multiple of dx.
ComparisonStats compare(const FdtdSolver& solver, const std::function<cplx(double)>& spectral, double x_end,
                        double spacing);

}  // namespace kgstar
