#include "couette/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "couette/banded.hpp"
#include "couette/fit.hpp"
#include "couette/rng.hpp"

namespace couette {

namespace {

// I + (dt/2) L and I - (dt/2) L for the trapezoidal step.
struct CrankNicolson {
  BandedComplexOperator right;
  BandedLU left;

  CrankNicolson(const BandedComplexOperator& op, double dt)
      : right(scaled(op, -dt / 2.0)), left(scaled(op, dt / 2.0)) {}

  static BandedComplexOperator scaled(const BandedComplexOperator& op, double factor) {
    BandedComplexOperator out = op;
    out.bands *= factor;
    out.add_to_diagonal(1.0);
    return out;
  }

  void step(GridFunction& w) const {
    GridFunction b = right.apply(w);
    left.solve_in_place(b);
    w = b;
  }
};

}  // namespace

Trajectory propagate_linear(const RadialGrid& g, const FlowParams& p, int k,
                            const GridFunction& w0, const PropagateOptions& opt) {
  if (opt.steps < 1 || !(opt.tau_end > 0.0)) {
    throw std::invalid_argument("propagate_linear: need positive horizon and steps");
  }
  const BandedComplexOperator op = k == 0 ? assemble_zero_mode(g, p) : assemble_Lk(g, p, k);
  const double dt = opt.tau_end / opt.steps;
  const CrankNicolson cn(op, dt);

  Trajectory traj;
  traj.k = k;
  traj.B = p.B();
  traj.dt = dt;
  traj.tau.reserve(opt.steps + 1);
  traj.l2.reserve(opt.steps + 1);
  traj.x.reserve(opt.steps + 1);

  GridFunction w = w0;
  auto record = [&](int step) {
    const double tau = step * dt;
    traj.tau.push_back(tau);
    traj.l2.push_back(norm(g, w, NormKind::L2));
    traj.x.push_back(norm(g, w, NormKind::X));
    const bool stride_hit = opt.store_stride > 0 && step % opt.store_stride == 0;
    if (step == 0 || step == opt.steps || stride_hit) {
      traj.tau_states.push_back(tau);
      traj.states.push_back(w);
    }
  };
  record(0);
  for (int step = 1; step <= opt.steps; ++step) {
    cn.step(w);
    record(step);
  }
  return traj;
}

DecayFit fit_decay(const std::vector<double>& tau, const std::vector<double>& norms,
                   double window_start) {
  DecayFit fit;
  std::vector<double> ts, logs;
  for (std::size_t i = 0; i < std::min(tau.size(), norms.size()); ++i) {
    if (tau[i] >= window_start && norms[i] > 0.0) {
      ts.push_back(tau[i]);
      logs.push_back(std::log(norms[i]));
    }
  }
  const LineFit line = fit_line(ts, logs);
  fit.points = line.points;
  if (line.points >= 2) {
    fit.rate = -line.slope;
    fit.prefactor = std::exp(line.intercept);
    fit.rms_residual = line.rms_residual;
    fit.window_start = ts.front();
    fit.window_end = ts.back();
  }
  return fit;
}

SemigroupCheckResult decay_envelope_check(const RadialGrid& g, const FlowParams& p, int k,
                                          double psi, const SemigroupCheckOptions& opt) {
  if (!(psi > 0.0)) {
    throw std::invalid_argument("decay_envelope_check: need a positive rate bound");
  }
  SemigroupCheckResult res;
  res.k = k;
  res.B = p.B();
  res.psi = psi;
  res.n_states = opt.n_states;

  const double tau_end = opt.tau_end_over_psi / psi;
  PropagateOptions prop;
  prop.tau_end = tau_end;
  prop.steps = opt.steps;

  Rng rng(opt.seed);
  std::vector<double> envelope;
  std::vector<double> tau_axis;
  for (int state = 0; state < opt.n_states; ++state) {
    const GridFunction w0 = random_test_function(g, rng.next());
    const double n0 = norm(g, w0, NormKind::L2);
    if (n0 == 0.0) continue;
    const Trajectory traj = propagate_linear(g, p, k, w0, prop);
    if (envelope.empty()) {
      tau_axis = traj.tau;
      envelope.assign(traj.tau.size(), 0.0);
    }
    for (std::size_t i = 0; i < traj.l2.size(); ++i) {
      envelope[i] = std::max(envelope[i], traj.l2[i] / n0);
    }
  }
  res.tau = tau_axis;
  res.envelope = envelope;

  // Decay bound for an accretive generator with pseudospectral gap psi.
  const double prefactor = std::exp(std::numbers::pi / 2.0);
  res.max_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < envelope.size(); ++i) {
    const double bound = prefactor * std::exp(-psi * tau_axis[i]);
    const double excess = envelope[i] / bound - 1.0;
    if (excess > res.max_excess) {
      res.max_excess = excess;
      res.tau_worst = tau_axis[i];
    }
  }
  res.pass = res.max_excess <= opt.tolerance;
  res.envelope_fit = fit_decay(tau_axis, envelope, opt.fit_window_over_psi / psi);
  res.fitted_rate = res.envelope_fit.rate;
  return res;
}

SpaceTimeNorms spacetime_norms(const RadialGrid& g, const FlowParams& p, int k,
                               const GridFunction& w0, double tau_end, int steps,
                               double c_weight) {
  const BandedComplexOperator op = k == 0 ? assemble_zero_mode(g, p) : assemble_Lk(g, p, k);
  const double dt = tau_end / steps;
  const CrankNicolson cn(op, dt);

  SpaceTimeNorms acc;
  acc.c_weight = c_weight;
  const int n = g.n();
  const double ak = std::abs(k);

  GridFunction w = w0;
  double i_l2 = 0.0, i_x = 0.0, i_grad = 0.0, i_mixed = 0.0;
  auto add = [&](double tau, double trapz_weight) {
    const double gw = std::exp(c_weight * tau);
    const double wt = trapz_weight * dt * gw * gw;
    double a_l2 = 0.0, a_x = 0.0, a_mixed = 0.0;
    for (int j = 0; j < n; ++j) {
      const double r = g.r[j];
      const double m = std::norm(w[j]);
      a_l2 += g.q[j] * m;
      a_x += g.q[j] * m / (r * r);
      const double mix = ak / r + r;
      a_mixed += g.q[j] * m * mix * mix;
    }
    const GridFunction dw = differentiate(g, w, 1, EndRows::dirichlet);
    double a_grad = 0.0;
    for (int j = 0; j < n; ++j) a_grad += g.q[j] * std::norm(dw[j]);
    i_l2 += wt * a_l2;
    i_x += wt * a_x;
    i_grad += wt * a_grad;
    i_mixed += wt * a_mixed;
  };

  add(0.0, 0.5);
  for (int step = 1; step <= steps; ++step) {
    cn.step(w);
    add(step * dt, step == steps ? 0.5 : 1.0);
  }
  acc.l2_l2 = std::sqrt(i_l2);
  acc.x_l2_l2 = std::sqrt(i_x);
  acc.grad_l2_l2 = std::sqrt(i_grad);
  acc.mixed_l2_l2 = std::sqrt(i_mixed);
  return acc;
}

}  // namespace couette
