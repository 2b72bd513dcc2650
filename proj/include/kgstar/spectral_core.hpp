#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>

namespace kgstar {

using cplx = std::complex<double>;

/// Constant potentials on the two half-axes, 0 <= a1 <= a2.
struct BranchPotentials {
  double a1 = 0.0;
  double a2 = 1.0;

  void validate() const;
};

enum class Branch : int { one = 1, two = 2 };
enum class Sign : int { minus = -1, plus = 1 };

constexpr Branch other(Branch b) { return b == Branch::one ? Branch::two : Branch::one; }
constexpr double to_double(Sign s) { return static_cast<double>(static_cast<int>(s)); }

/// Normalization of the spectral weights q_l that makes the transform an
/// isometry H -> L²_q. Calibrated by the Plancherel suite; see README.
inline constexpr double kPlancherelConstant = 1.0 / std::numbers::pi;

/// s_j evaluated at its own branch point λ = a_j.
class BranchPointError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// √z with arg z taken in [-π, π), so √(-1) = -i.
cplx branch_sqrt(cplx z);

/// ξ_k(λ) = √(λ - a_k) under branch_sqrt.
cplx xi(Branch k, double lambda, const BranchPotentials& pots);

/// s_1 = -ξ_2/ξ_1, s_2 = -ξ_1/ξ_2. Throws BranchPointError at λ = a_j.
cplx s(Branch j, double lambda, const BranchPotentials& pots);

/// Spectral weight q_l(λ) = c_q ξ_l / |ξ_1 + ξ_2|² above a_l, zero at and below a_l.
double q(Branch l, double lambda, const BranchPotentials& pots, double cq = kPlancherelConstant);

/// q_1 at λ = a2 + μ for μ > 0, evaluated without forming λ - a2.
double q1_above_threshold(double mu, const BranchPotentials& pots, double cq = kPlancherelConstant);

struct EigenfunctionDescriptor {
  Sign sign = Sign::minus;
  Branch j = Branch::one;  ///< incoming channel
  Branch k = Branch::one;  ///< branch on which F is evaluated
  double x = 0.0;          ///< coordinate on branch k, x >= 0
};

/// Generalized eigenfunction F^{±,j}_{λ,k}(x).
cplx eigenfunction(const EigenfunctionDescriptor& desc, double lambda, const BranchPotentials& pots);

}  // namespace kgstar
