#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "couette/grid.hpp"
#include "couette/operators.hpp"
#include "couette/resolvent.hpp"

// Independent reference implementations used to cross-check the production
// paths: dense linear algebra in place of banded solvers, Gauss-Legendre
// panels in place of grid quadrature, and high-order finite differences on
// grids these routines build for themselves.
namespace couette::oracle {

// Composite 8-point Gauss-Legendre quadrature over [a, b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 int panels = 256);
std::complex<double> integrate_complex(const std::function<std::complex<double>(double)>& f,
                                       double a, double b, int panels = 256);

// Smallest singular value of the norm-pair realization of L_k - i s computed
// densely. Guarded to n <= 1024.
double dense_sigma_min(const RadialGrid& g, const FlowParams& p, int k, double s,
                       NormPair pair, double c2 = 0.05);

// Decaying solution of phi'' - (k^2 - 1/4) phi / r^2 = e^{-r^2/8} w(r) at the
// grid nodes via the explicit kernel, with the source given analytically.
GridFunction greens_stream(const RadialGrid& g, int k,
                           const std::function<std::complex<double>(double)>& w);

// Same kernel for nodal data, integrating the piecewise-linear interpolant.
GridFunction greens_stream_nodal(const RadialGrid& g, int k, const GridFunction& w);

// Solution of g'' + (A/r) g' - (B/r^2) g = 0, g(r_lo) = 1, transported from
// the invariant slope field K = r g' / g + const. The integration runs in
// log r, switching charts so sign changes of g are crossed exactly; dg holds
// the analytic first derivative reconstructed from the slope field.
struct RiccatiSolution {
  double A = 0.0;
  double B = 0.0;
  Eigen::ArrayXd r;
  Eigen::ArrayXd g;
  Eigen::ArrayXd dg;
  std::vector<double> zero_crossings;
  bool positive = false;        // no interior sign change
  double residual = 0.0;        // slope-form residual, masked near zeros of g
  double residual_linear = 0.0; // relative residual of the linear equation
};
RiccatiSolution riccati_g(double a_coeff, double b_coeff, double r_lo = 0.1,
                          double r_hi = 10.0, int n = 16384);

// Boundary-to-interior control of the sup norm: ratios of |w|_inf^2 against
// 2 ||w|| ||w'|| on random samples, a near-extremal family for the constant,
// and the weighted variants sup |w/r^alpha|^2 against the matching products.
struct InterpolationReport {
  double max_ratio = 0.0;       // random samples, must stay at or below 1
  double extremal_ratio = 0.0;  // ramp-and-decay family pushed toward the constant
  std::vector<double> alphas;
  std::vector<double> weighted_constants;
  int samples = 0;
};
InterpolationReport interpolation_checks(int n_samples, std::uint64_t seed);

// High-order finite-difference check of the operator factorization at |k| = 1
// and of the quadratic-form identities, on this routine's own grid.
struct FactorizationReport {
  int k = 0;
  int n = 0;
  double pointwise_residual = 0.0; // |k| = 1 product-form application vs direct
  double quadratic_residual = 0.0; // Re<L w, w> identity
  double weighted_residual = 0.0;  // Re<L w, w / r^2> identity
};
FactorizationReport factorization_identities(int k, int n, double r_max,
                                             std::uint64_t seed);

// Gaussian moments entering the physical-units translation.
double gaussian_moment_cubed();  // int_0^inf r^3 e^{-r^2/4} dr = 8
double gaussian_moment_first();  // int_0^inf r   e^{-r^2/4} dr = 2

}  // namespace couette::oracle
