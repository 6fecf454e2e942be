#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "couette/banded.hpp"
#include "couette/grid.hpp"

namespace couette {

// Stream function of one vorticity mode in both gauges: phi solves
//   phi'' - (k^2 - 1/4) phi / r^2 = e^{-r^2/8} w,
// decaying at both ends, and phi_breve = phi / r^{1/2} is the gauge entering
// the mode-coupling terms.
struct StreamPair {
  GridFunction phi;
  GridFunction phi_breve;
  int k = 0;
};

// Banded elliptic solver with cached factorizations per wavenumber. Interior
// rows use a fourth-order three-point (Numerov) closure on uniform grids and
// plain second-order stencils otherwise; the end rows match the decaying
// power-law branches r^{1/2 + |k|} and r^{1/2 - |k|} of the homogeneous
// equation.
class StreamSolver {
 public:
  StreamSolver(const RadialGrid& g, int k_max);
  // Vorticity in, stream pair out: the right-hand side is e^{-r^2/8} w.
  StreamPair solve(int k, const GridFunction& w) const;
  // Same solve with the right-hand side given directly.
  GridFunction solve_source(int k, const GridFunction& source) const;
  const RadialGrid& grid() const { return *grid_; }

 private:
  const RadialGrid* grid_;
  int k_max_;
  std::vector<BandedLU> lu_;                        // index |k| - 1
  std::vector<BandedComplexOperator> rhs_weights_;  // right-hand-side stencil
};

// One-shot convenience wrapper around StreamSolver.
StreamPair solve_stream(const RadialGrid& g, int k, const GridFunction& w);

// Radial derivative of the zero-mode breve stream function,
//   G(r) = (1/r) int_0^r s^{1/2} e^{-s^2/8} w0(s) ds,
// evaluated by per-cell Gauss quadrature of the nodal interpolant.
GridFunction zero_mode_stream_derivative(const RadialGrid& g, const GridFunction& w0);

// Random-sample audit of the weighted elliptic estimates for solutions of
// phi'' - (k^2 - 1/4) phi / r^2 = source: the exact by-parts identity
//   Re<-source, r^beta phi> = ||r^{beta/2} phi'||^2
//                             + (k^2 - 1/4 - beta(beta-1)/2) ||r^{beta/2-1} phi||^2,
// its coercivity ratio against ||r^{beta/2} phi'||^2 + k^2 ||r^{beta/2-1} phi||^2,
// and the empirical constants of the five-norm suite bounded by
// ||r^{beta/2+1} source||. Weighted integrals converge only for
// -2|k| < beta < 2|k|; pairs outside that window are reported infeasible.
struct EllipticAuditRow {
  int k = 0;
  double beta = 0.0;
  bool feasible = false;
  double identity_residual = 0.0;  // relative residual of the by-parts identity
  double min_coercivity = 0.0;     // min over samples of LHS / coercive sum
  double c_second = 0.0;           // ||r^{beta/2+1} phi''|| / D
  double c_grad_sup = 0.0;         // |k|^{1/2} sup r^{(beta+1)/2} |phi'| / D
  double c_grad = 0.0;             // |k| ||r^{beta/2} phi'|| / D
  double c_val_sup = 0.0;          // |k|^{3/2} sup r^{(beta-1)/2} |phi| / D
  double c_val = 0.0;              // k^2 ||r^{beta/2-1} phi|| / D
  int samples = 0;
};
std::vector<EllipticAuditRow> elliptic_estimate_audit(const RadialGrid& g,
                                                      const std::vector<double>& betas,
                                                      const std::vector<int>& ks,
                                                      int n_samples, std::uint64_t seed);

}  // namespace couette
