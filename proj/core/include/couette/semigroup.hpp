#pragma once

#include <cstdint>
#include <vector>

#include "couette/grid.hpp"
#include "couette/operators.hpp"

namespace couette {

struct PropagateOptions {
  double tau_end = 1.0;
  int steps = 1000;
  int store_stride = 0;  // 0 stores only the endpoints
};

// Crank-Nicolson trajectory of dw/dtau + L_k w = 0 with per-step norm traces.
struct Trajectory {
  int k = 0;
  double B = 0.0;
  double dt = 0.0;
  std::vector<double> tau;       // per step, starting at 0
  std::vector<double> l2;        // ||w(tau)||
  std::vector<double> x;         // ||w(tau)/r||
  std::vector<double> tau_states;
  std::vector<GridFunction> states;
};

Trajectory propagate_linear(const RadialGrid& g, const FlowParams& p, int k,
                            const GridFunction& w0, const PropagateOptions& opt);

// Exponential fit of a norm trace over a trailing window.
struct DecayFit {
  double rate = 0.0;       // positive means decay
  double prefactor = 0.0;  // value extrapolated to tau = 0
  double rms_residual = 0.0;
  double window_start = 0.0;
  double window_end = 0.0;
  int points = 0;
};
DecayFit fit_decay(const std::vector<double>& tau, const std::vector<double>& norms,
                   double window_start);

struct SemigroupCheckOptions {
  int n_states = 20;
  double tau_end_over_psi = 5.0;  // tau_end = this / psi
  int steps = 1500;
  double tolerance = 0.05;        // allowed relative excess over the envelope bound
  double fit_window_over_psi = 1.0;
  std::uint64_t seed = 0x9e3779b97f4a7c15ull;
};

// Propagates a batch of random states and checks the decay envelope against
// exp(-psi tau + pi/2), the bound that the spectral-gap-free resolvent
// machinery guarantees for an accretive generator.
struct SemigroupCheckResult {
  bool pass = false;
  int k = 0;
  double B = 0.0;
  double psi = 0.0;
  double max_excess = 0.0;  // max over tau of envelope / bound - 1
  double tau_worst = 0.0;
  double fitted_rate = 0.0; // from the envelope tail
  DecayFit envelope_fit;
  std::vector<double> tau;
  std::vector<double> envelope;
  int n_states = 0;
};

SemigroupCheckResult decay_envelope_check(const RadialGrid& g, const FlowParams& p, int k,
                                          double psi, const SemigroupCheckOptions& opt = {});

// Space-time accumulation along one linear trajectory with the growing weight
// e^{c tau}: L2-in-time norms of w, w/r, w', and (|k|/r + r) w.
struct SpaceTimeNorms {
  double c_weight = 0.0;
  double l2_l2 = 0.0;
  double x_l2_l2 = 0.0;
  double grad_l2_l2 = 0.0;
  double mixed_l2_l2 = 0.0;
};
SpaceTimeNorms spacetime_norms(const RadialGrid& g, const FlowParams& p, int k,
                               const GridFunction& w0, double tau_end, int steps,
                               double c_weight);

}  // namespace couette
