#include "kgstar/spectral_core.hpp"

#include <cmath>
#include <string>

namespace kgstar {

void BranchPotentials::validate() const {
  if (!std::isfinite(a1) || !std::isfinite(a2) || a1 < 0.0 || a2 < a1)
    throw std::invalid_argument("branch potentials must satisfy 0 <= a1 <= a2 < inf (got a1=" +
                                std::to_string(a1) + ", a2=" + std::to_string(a2) + ")");
}

cplx branch_sqrt(cplx z) {
  const double r = std::abs(z);
  if (r == 0.0) return {0.0, 0.0};
  double phi = std::arg(z);
  if (phi >= std::numbers::pi) phi = -std::numbers::pi;
  // real/imaginary axes handled exactly so √4 = 2 and √(-1) = -i bit for bit
  if (z.imag() == 0.0) {
    return z.real() > 0 ? cplx(std::sqrt(z.real()), 0.0) : cplx(0.0, -std::sqrt(-z.real()));
  }
  const double sr = std::sqrt(r);
  return {sr * std::cos(0.5 * phi), sr * std::sin(0.5 * phi)};
}

static double potential(Branch k, const BranchPotentials& pots) {
  return k == Branch::one ? pots.a1 : pots.a2;
}

cplx xi(Branch k, double lambda, const BranchPotentials& pots) {
  return branch_sqrt(cplx(lambda - potential(k, pots), 0.0));
}

cplx s(Branch j, double lambda, const BranchPotentials& pots) {
  const cplx own = xi(j, lambda, pots);
  if (own == cplx(0.0, 0.0))
    throw BranchPointError("s_j evaluated at its branch point lambda = a_j (" + std::to_string(lambda) + ")");
  return -xi(other(j), lambda, pots) / own;
}

double q(Branch l, double lambda, const BranchPotentials& pots, double cq) {
  if (!(lambda > potential(l, pots))) return 0.0;
  const cplx x1 = xi(Branch::one, lambda, pots);
  const cplx x2 = xi(Branch::two, lambda, pots);
  const cplx own = l == Branch::one ? x1 : x2;
  return cq * own.real() / std::norm(x1 + x2);
}

double q1_above_threshold(double mu, const BranchPotentials& pots, double cq) {
  if (!(mu > 0.0)) return 0.0;
  const double x1 = std::sqrt(pots.a2 - pots.a1 + mu);
  const double x2 = std::sqrt(mu);
  return cq * x1 / ((x1 + x2) * (x1 + x2));
}

cplx eigenfunction(const EigenfunctionDescriptor& d, double lambda, const BranchPotentials& pots) {
  if (d.x < 0.0) throw std::invalid_argument("eigenfunction coordinate must be >= 0");
  const cplx i(0.0, 1.0);
  const double sg = to_double(d.sign);
  if (d.k == d.j) {
    const cplx z = xi(d.j, lambda, pots) * d.x;
    return std::cos(z) + sg * i * s(d.j, lambda, pots) * std::sin(z);
  }
  return std::exp(sg * i * xi(d.k, lambda, pots) * d.x);
}

}  // namespace kgstar
