#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "kgstar/initial_data.hpp"
#include "kgstar/quadrature.hpp"
#include "kgstar/spectral_core.hpp"

namespace kgstar {

using BranchCallable = std::function<cplx(double)>;

/// Function on the two branches, effectively supported in [0, x_max] on each.
struct BranchFunction {
  BranchCallable f1;
  BranchCallable f2;
  double x_max = 0.0;

  cplx operator()(Branch k, double x) const { return k == Branch::one ? f1(x) : f2(x); }
  static BranchFunction zero(double x_max);
};

/// Uniform samples x_i = i·h, i = 0..n-1, on both branches (index 0 is the vertex).
struct SampledBranchFunction {
  double h = 0.0;
  std::vector<cplx> v1;
  std::vector<cplx> v2;

  double x(std::size_t i) const { return h * static_cast<double>(i); }
  const std::vector<cplx>& values(Branch k) const { return k == Branch::one ? v1 : v2; }
};

/// Spectral data (g₁, g₂), g_k defined on [a_k, lambda_max] and zero below a_k.
struct SpectralPair {
  BranchCallable g1;
  BranchCallable g2;
  double lambda_max = 0.0;

  cplx operator()(Branch k, double lambda) const { return k == Branch::one ? g1(lambda) : g2(lambda); }
};

struct SampledSpectralPair {
  std::vector<double> lambda;
  std::vector<cplx> g1;
  std::vector<cplx> g2;
};

/// Samples of f on a uniform grid of spacing h covering [0, x_end].
SampledBranchFunction sample(const BranchFunction& f, double h, double x_end);

// CSV with header `branch,coordinate,re,im`; one row per sample, branch 1 first.
void write_csv(std::ostream& os, const SampledBranchFunction& f);
SampledBranchFunction read_branch_csv(std::istream& is);
void write_csv(std::ostream& os, const SampledSpectralPair& g);
SampledSpectralPair read_spectral_csv(std::istream& is);

/// Gauss-Legendre panel discretization of a BranchFunction, so that many
/// transforms reuse one set of function evaluations.
class BranchDiscretization {
 public:
  /// Panels of width <= panel_width, `order` Gauss nodes each, covering [0, f.x_max].
  BranchDiscretization(const BranchFunction& f, double panel_width, int order = 16);

  /// (Vf)_k(λ) = Σ_branches ∫ f(x) conj(F^{-,k}_λ(x)) dx.
  cplx transform(Branch k, double lambda, const BranchPotentials& pots) const;
  /// ‖f‖²_H using the same nodes.
  double h_norm_squared() const;

  std::size_t node_count() const { return x_.size(); }
  double panel_width() const { return width_; }

 private:
  std::vector<double> x_;
  std::vector<double> w_;
  std::vector<cplx> f1_;
  std::vector<cplx> f2_;
  double width_;
};

/// Forward transform at every λ of the grid. The discretization is refined
/// (panel width halved) until two successive levels agree to tolerance;
/// throws QuadratureError reporting the worst λ otherwise.
SampledSpectralPair forward_transform(const BranchFunction& f, std::span<const double> lambda_grid,
                                      const BranchPotentials& pots, const QuadratureConfig& quad);

/// Callable forward transform valid on [a_k, lambda_max], with the
/// discretization refined against a probe grid over that range.
SpectralPair forward_transform_callable(const BranchFunction& f, double lambda_max,
                                        const BranchPotentials& pots, const QuadratureConfig& quad);

/// |g|_q = (Σ_k ∫_{a_k}^{λ_max} q_k |g_k|² dλ)^{1/2}. `breaks` lists λ values
/// where g has reduced smoothness. Throws QuadratureError on non-convergence.
double q_norm(const SpectralPair& g, const BranchPotentials& pots, const QuadratureConfig& quad,
              double cq = kPlancherelConstant, std::span<const double> breaks = {});

/// ‖f‖_H over [0, f.x_max] by adaptive quadrature.
double h_norm(const BranchFunction& f, const QuadratureConfig& quad);

/// u₀ with (Vu₀)₁ = ψ̃, (Vu₀)₂ = 0, evaluated at one point:
///   u₀,k(x) = ∫ q₁(λ) ψ̃(λ) F^{-,1}_{λ,k}(x) dλ.
cplx reconstruct_at(Branch k, double x, const SpectralProfile& profile, const BranchPotentials& pots,
                    const QuadratureConfig& quad, double cq = kPlancherelConstant);

/// Bulk evaluator of the same u₀ with a fixed Gauss rule in μ on each smooth
/// piece of ψ, sized so the kernels are resolved for x <= x_cap. Much cheaper
/// than reconstruct_at when u₀ is needed at many points. The rule is checked
/// at x_cap against one with 1.5× the nodes; QuadratureError if they differ.
class InitialDataSynthesis {
 public:
  InitialDataSynthesis(const SpectralProfile& profile, const BranchPotentials& pots, double x_cap,
                       double cq = kPlancherelConstant);
  cplx operator()(Branch k, double x) const;
  double x_cap() const { return x_cap_; }
  std::size_t node_count() const { return mu_.size(); }

 private:
  void build(const SpectralProfile& profile, double x_cap, double oversample);

  BranchPotentials pots_;
  double cq_;
  double x_cap_;
  std::vector<double> mu_, w_, xi1_, s1_, xi2_;
};

struct ReconstructOptions {
  /// Stop doubling X once ‖u₀‖² on [X, 2X] falls below tail_tol times the mass on [0, X].
  double tail_tol = 1e-12;
  double x_start = 64.0;
  double x_limit = 1.0e5;
};

/// Callable u₀ with x_max chosen by the tail criterion. Throws QuadratureError
/// when the tail is still significant at x_limit.
BranchFunction reconstruct_initial(const SpectralProfile& profile, const BranchPotentials& pots,
                                   const QuadratureConfig& quad, double cq = kPlancherelConstant,
                                   const ReconstructOptions& opts = {});

/// Sampled u₀ on a uniform grid of spacing h over [0, x_end].
SampledBranchFunction reconstruct_initial_sampled(const SpectralProfile& profile, const BranchPotentials& pots,
                                                  double h, double x_end, const QuadratureConfig& quad,
                                                  double cq = kPlancherelConstant);

struct RoundTripReport {
  double residual = 0.0;       ///< |V u₀ - (ψ̃, 0)|_q / |ψ̃|_q
  double profile_norm = 0.0;   ///< |(ψ̃, 0)|_q
  double out_of_band = 0.0;    ///< relative q-mass of V u₀ outside the band
  double x_max = 0.0;
};

/// Reconstruct u₀ from ψ̃, transform it back, and measure the residual
/// against (ψ̃, 0) in the q-norm over [a_k, a2 + 2β]. Residual and leakage are
/// resolved to about 1e-6 relative, which is all a pass/fail decision needs.
RoundTripReport round_trip(const SpectralProfile& profile, const BranchPotentials& pots,
                           const QuadratureConfig& quad, double cq = kPlancherelConstant,
                           const ReconstructOptions& opts = {});

/// λ grid of n Gauss-Legendre nodes mapped onto [lo, hi].
std::vector<double> gauss_lambda_grid(double lo, double hi, int n);

}  // namespace kgstar
