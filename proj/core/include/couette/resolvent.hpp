#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "couette/banded.hpp"
#include "couette/grid.hpp"
#include "couette/operators.hpp"

namespace couette {

// Input/output norm pairs for the shifted-operator smallest singular value.
//   l2_to_l2      sigma_min of L_k - i s on plain L2
//   x_to_x        same operator conjugated by the 1/r weight
//   hm1_shifted   dual-norm data against H1-type response for the operator
//                 additionally shifted down by c2 |kB|^{1/3}
//   x_hm1_shifted the 1/r-conjugated variant of hm1_shifted
enum class NormPair { l2_to_l2, x_to_x, hm1_shifted, x_hm1_shifted };

std::string to_string(NormPair pair);
NormPair norm_pair_from_string(const std::string& name);

struct SigmaMinOptions {
  double tol = 1e-9;          // relative stabilization of the iterate
  double residual_tol = 1e-6; // eigen-residual acceptance level
  int max_iter = 500;
  std::uint64_t seed = 0x1234abcd5678ef01ull;
  double c2 = 0.05;           // down-shift coefficient for the *_shifted pairs
};

struct SigmaMinResult {
  double sigma = 0.0;
  int iterations = 0;
  bool converged = false;
  double residual = 0.0;
  Eigen::VectorXcd vector;  // minimizing input-space direction
};

// Smallest singular value of the chosen norm-pair realization of L_k - i s,
// by inverse iteration on the normal matrix with optional warm start.
SigmaMinResult resolvent_norm_at(const RadialGrid& g, const FlowParams& p, int k, double s,
                                 NormPair pair, const SigmaMinOptions& opt = {},
                                 const Eigen::VectorXcd* warm_start = nullptr);

struct ScanOptions {
  int coarse_points = 128;     // log-clustered points per sign of the shift
  double s_max_multiple = 4.0; // scan reach in units of |kB|
  double rel_tol = 1e-3;       // golden-section shift resolution
  int max_refine_iter = 80;
  NormPair pair = NormPair::l2_to_l2;
  SigmaMinOptions sigma = {};
};

// Shift sweep of sigma_min(L_k - i s) and its minimum over s.
struct ScanResult {
  int k = 0;
  double B = 0.0;
  NormPair pair = NormPair::l2_to_l2;
  std::vector<double> shifts;      // coarse grid, ascending
  std::vector<double> sigma_min;   // value at each coarse shift
  double psi = 0.0;                // refined minimum over all shifts
  double psi_shift = 0.0;          // arg min
  int sigma_evaluations = 0;
  std::vector<std::string> flags;  // "unresolved-minimum", "edge-minimum", ...
};

ScanResult pseudospectral_bound(const RadialGrid& g, const FlowParams& p, int k,
                                const ScanOptions& opt = {});

// Quasimode built from a parabolic bump of width 1/r0 at radius r0, driven at
// the shift i beta_1 / r0^2 with beta_1 = r0^6. Its response ratio scales as
// beta_1^{1/3} and upper-bounds how sharp the scanned minimum can be.
struct WitnessResult {
  double r0 = 0.0;
  double beta1 = 0.0;
  double lambda = 0.0;
  double norm_l2 = 0.0;        // quadrature norm of the bump
  double norm_l2_exact = 0.0;  // closed form r0^{-5/2} / sqrt(30)
  double ratio_analytic = 0.0; // ||(L_1 - i s) w|| / ||w||, operator in closed form
  double ratio_matrix = 0.0;   // same with the assembled matrix
  double c_witness = 0.0;      // ratio_analytic / beta1^{1/3}
  int n = 0;
};
WitnessResult sharpness_witness(double r0, double r_max = 20.0, int nodes_per_width = 32);

// Random-sample audit of the dual-norm resolvent bound with the operator
// shifted down by c2 |kB|^{1/3}: records the largest observed constants in
//   ||w||_H1 + |kB|^{1/6} ||w|| <= C ||(L_k - i s - c2|kB|^{1/3}) w||_Hm1*
// and its 1/r-conjugated variant, over random states and shifts.
struct ShiftedAuditResult {
  double c2 = 0.0;
  double max_constant_l2 = 0.0;
  double max_constant_x = 0.0;
  int samples = 0;
};
ShiftedAuditResult shifted_resolvent_audit(const RadialGrid& g, const FlowParams& p, int k,
                                           double c2, int n_samples, std::uint64_t seed);

// Largest c2 in [0, c2_hi] keeping both audit constants at or below cap, by
// bisection over repeated audits.
double calibrate_c2(const RadialGrid& g, const FlowParams& p, int k, double cap,
                    double c2_hi, int n_samples, std::uint64_t seed);

}  // namespace couette
