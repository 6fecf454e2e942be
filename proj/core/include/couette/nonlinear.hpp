#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "couette/banded.hpp"
#include "couette/grid.hpp"
#include "couette/operators.hpp"
#include "couette/stream.hpp"

namespace couette {

// Truncated mode stack w_k(r, tau) for k in [-K, K], stored as columns
// K + k of a complex matrix. Real fields keep w_{-k} = conj(w_k).
struct ModeState {
  Eigen::MatrixXcd modes;  // n x (2K + 1)
  double tau = 0.0;
  int K = 0;
  FlowParams params;

  Eigen::VectorXcd mode(int k) const { return modes.col(K + k); }
  int n() const { return static_cast<int>(modes.rows()); }
};

// Ring-shaped initial data: every listed wavenumber gets the profile
// r^{|k|} exp(-((r - r_center)/width)^2), normalized to unit L2 and scaled by
// amplitude, with the conjugate filled in at -k.
struct RingInitialData {
  double amplitude = 1e-3;
  double r_center = 5.0;
  double width = 1.0;
  std::vector<int> modes = {};  // k >= 1 entries; empty means 1..K
  bool seed_zero_mode = false;
};

ModeState make_ring_state(const RadialGrid& g, const FlowParams& p, int K,
                          const RingInitialData& init);

// Mode-coupling terms of the vorticity system,
//   f1_k = i k sum_l w_l pb'_{k-l} / r
//          + sum_l i (k-l) (1/4 - 1/(2 r^2)) w_l pb_{k-l},
//   f2_k = sum_l i (k-l) w_l pb_{k-l} / r,
// where pb_m is the breve stream function of mode m and pb'_0 enters through
// its exact quadrature. The stepper consumes N_k = f1_k - (f2_k)'.
struct NonlinearTerms {
  Eigen::MatrixXcd f1;
  Eigen::MatrixXcd f2;
};
NonlinearTerms assemble_coupling(const StreamSolver& solver, const ModeState& state);

// Time stepper: Crank-Nicolson on the linear operators, second-order
// extrapolated explicit coupling, and a reality-symmetrization pass whose
// largest correction is tracked as a consistency diagnostic.
class Stepper {
 public:
  Stepper(const RadialGrid& g, const FlowParams& p, int K, double dt);
  void step(ModeState& state);
  double dt() const { return dt_; }
  double max_reality_correction() const { return max_sym_; }
  const StreamSolver& stream_solver() const { return streams_; }

 private:
  const RadialGrid* grid_;
  StreamSolver streams_;
  double dt_ = 0.0;
  std::vector<BandedComplexOperator> right_;  // I - (dt/2) L_k
  std::vector<BandedLU> left_lu_;             // I + (dt/2) L_k
  Eigen::MatrixXcd prev_coupling_;
  bool have_prev_ = false;
  double max_sym_ = 0.0;
};

enum class Verdict { decayed, blowup, inconclusive };
std::string to_string(Verdict v);

// Weighted space-time energy of each mode, accumulated along a simulation
// with the growing weight e^{c |kB|^{1/3} tau} on the nonzero modes.
struct EnergyReport {
  double c_weight = 0.0;
  std::vector<double> per_mode;  // index k = 0..K; entry 0 is the zero-mode energy
  double total_nonzero = 0.0;
  bool finite = false;
};

struct SimOptions {
  double tau_end = 4.0;
  double dt = 2e-3;
  int store_stride = 10;
  double blowup_factor = 10.0;     // stop once total norm exceeds this multiple
  double decay_threshold = 1e-3;   // nonzero-mode contraction declaring decay
  double c_weight = 0.0;           // energy weight coefficient
  bool track_energy = true;
};

struct SimRecord {
  Verdict verdict = Verdict::inconclusive;
  std::vector<double> tau;       // sampled times
  Eigen::MatrixXd mode_l2;       // samples x (K + 1), ||w_k|| for k = 0..K
  double initial_nonzero = 0.0;  // sum over k != 0 of ||w_k(0)||
  double final_nonzero = 0.0;
  double fitted_rate = 0.0;      // trailing decay rate of the nonzero-mode sum
  double max_reality_correction = 0.0;
  EnergyReport energy;
  int steps_taken = 0;
};

SimRecord simulate(const RadialGrid& g, const FlowParams& p, int K,
                   const RingInitialData& init, const SimOptions& opt);

// Amplitude threshold search per circulation ratio: geometric ramp until the
// run stops decaying, then bisection between the last decayed and the first
// non-decayed amplitude.
struct SweepOptions {
  int K = 8;
  double amp_lo = 1e-2;
  double amp_cap = 1e4;
  double ramp_factor = 2.0;
  int bisect_iters = 4;
  SimOptions sim = {};
};

struct SweepRow {
  double B = 0.0;
  double amplitude = 0.0;
  Verdict verdict = Verdict::inconclusive;
  double fitted_rate = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;                       // every run performed
  std::vector<std::pair<double, double>> thresholds;  // (B, threshold amplitude)
  double slope = 0.0;                                // d log threshold / d log B
  bool capped = false;
  std::vector<std::string> flags;
};

SweepResult threshold_sweep(const RadialGrid& g, const std::vector<double>& b_values,
                            const SweepOptions& opt);

// Translation back to physical units at time t = e^tau: the Gaussian-weighted
// norm of each vorticity mode (equal to the plain L2 norm of w_k by the
// exact weight cancellation), the resulting L1 vorticity bound, and the
// critical scale |A2|^{1/3} nu^{2/3} the amplitudes compare against.
struct PhysicalReport {
  double t = 0.0;
  double nu = 0.0;
  std::vector<double> m_norms;  // k = 0..K
  double l1_bound = 0.0;
  double threshold_scale = 0.0;
};
PhysicalReport translate_physical(const RadialGrid& g, const ModeState& state);

// Streaming accumulator for the weighted space-time energies. Feed every
// accepted step; in-time integrals use the trapezoid rule, suprema a running
// max. The nonzero-mode energy of mode k collects
//   sup_tau g_k ||w_k|| + |kB|^{1/6} ( ||g_k w_k||_{L2 tau} + sup_tau g_k ||w_k/r||
//     + |k| ||g_k w_k / r^2||_{L2 tau} + |k|^{1/2} || g_k sup_r |w_k|/r^{3/2} ||_{L2 tau} )
//   + |kB|^{1/3} ||g_k w_k / r||_{L2 tau}
// with g_k(tau) = e^{c |kB|^{1/3} tau}; the zero mode collects
//   |B|^{1/6} ( sup_tau ||w_0/r|| + || sup_r |w_0|/r^{3/2} ||_{L2 tau}
//     + ||w_0 / r^2||_{L2 tau} + ||w_0||_{L2 tau} ).
class EnergyAccumulator {
 public:
  EnergyAccumulator(const RadialGrid& g, const FlowParams& p, int K, double c_weight);
  void add(const ModeState& state);
  EnergyReport report() const;

 private:
  const RadialGrid* grid_;
  double B_ = 0.0;
  int K_ = 0;
  double c_ = 0.0;
  bool have_prev_ = false;
  double prev_tau_ = 0.0;
  Eigen::MatrixXd prev_sq_;     // squared weighted instantaneous values
  Eigen::MatrixXd sup_terms_;   // running suprema per mode
  Eigen::MatrixXd int_terms_;   // running integrals of squares per mode
};

}  // namespace couette
