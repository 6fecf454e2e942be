#pragma once

#include <cstdint>

#include "couette/banded.hpp"
#include "couette/grid.hpp"

namespace couette {

// Background vortex v_theta = A1 r + A2 / r in viscosity units. Only the
// circulation ratio B = A2 / nu enters the self-similar dynamics; A1 acts as a
// pure phase and is carried along for the physical-units translation.
struct FlowParams {
  double A1 = 0.0;
  double A2 = 0.0;
  double nu = 1.0;

  double B() const { return A2 / nu; }
  double beta(int k) const { return static_cast<double>(k) * B(); }
  static FlowParams from_B(double b) { return FlowParams{0.0, b, 1.0}; }
};

// Mode-k vorticity operator on the self-similar half line,
//   L_k w = -w'' + ((k^2 - 1/4)/r^2 + r^2/16 - 1/2) w + i k B w / r^2,
// discretized with Dirichlet end rows. Rejects k = 0; the zero mode has its
// own assembly below.
BandedComplexOperator assemble_Lk(const RadialGrid& g, const FlowParams& p, int k);

// Same potential continued to k = 0. Purely real; its continuum ground state
// r^{1/2} e^{-r^2/8} is neutral, so the zero mode relaxes in 1/r-weighted
// norms rather than in plain L2.
BandedComplexOperator assemble_zero_mode(const RadialGrid& g, const FlowParams& p);

// A - i s I, with the shift recorded on the returned operator.
BandedComplexOperator resolvent_matrix(const BandedComplexOperator& a, double s);

// A - c I for real c, recorded likewise.
BandedComplexOperator shifted_matrix(const BandedComplexOperator& a, double c);

// Deterministic sum of a few random Gaussian bumps, supported away from both
// ends so the Dirichlet rows see values at the reflection-ghost scale.
GridFunction random_test_function(const RadialGrid& g, std::uint64_t seed);

// Random-sample audit of the quadratic form of L_k: accretivity margin,
// the |k| = 1 factorization identity, the 1/r^2-weighted identity, and the
// shift-uniform bounds ||w|| and ||w||_H1 against ||(L_k - i s) w||.
struct CoercivityReport {
  int k = 0;
  int samples = 0;
  double min_rayleigh = 0.0;         // min Re<L w, w> / ||w||^2, continuum value |k|/2
  double max_factorization_residual = 0.0;  // relative, |k| = 1 only, else 0
  double max_weighted_residual = 0.0;       // relative, 1/r^2-weighted identity
  double max_l2_ratio = 0.0;                // |k| ||w|| / ||(L - i s) w||
  double max_h1_ratio = 0.0;                // |k|^{1/2} ||w||_H1 / ||(L - i s) w||
};
CoercivityReport coercivity_audit(const RadialGrid& g, const FlowParams& p, int k,
                                  int n_samples, std::uint64_t seed);

}  // namespace couette
