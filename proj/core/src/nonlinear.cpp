#include "couette/nonlinear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "couette/fit.hpp"
#include "couette/semigroup.hpp"

namespace couette {

namespace {

double column_l2(const RadialGrid& g, const Eigen::MatrixXcd& modes, int col) {
  double acc = 0.0;
  for (int j = 0; j < modes.rows(); ++j) {
    acc += g.q[j] * std::norm(modes(j, col));
  }
  return std::sqrt(acc);
}

double nonzero_mode_sum(const RadialGrid& g, const ModeState& state) {
  double acc = 0.0;
  for (int k = -state.K; k <= state.K; ++k) {
    if (k == 0) continue;
    acc += column_l2(g, state.modes, state.K + k);
  }
  return acc;
}

}  // namespace

ModeState make_ring_state(const RadialGrid& g, const FlowParams& p, int K,
                          const RingInitialData& init) {
  if (K < 1) {
    throw std::invalid_argument("make_ring_state: need K >= 1");
  }
  ModeState state;
  state.K = K;
  state.params = p;
  state.modes = Eigen::MatrixXcd::Zero(g.n(), 2 * K + 1);

  std::vector<int> ks = init.modes;
  if (ks.empty()) {
    for (int k = 1; k <= K; ++k) ks.push_back(k);
  }
  if (init.seed_zero_mode) ks.push_back(0);

  for (int k : ks) {
    if (k < 0 || k > K) {
      throw std::invalid_argument(fmt::format("make_ring_state: mode {} outside 0..{}", k, K));
    }
    Eigen::VectorXcd profile(g.n());
    for (int j = 0; j < g.n(); ++j) {
      const double r = g.r[j];
      const double t = (r - init.r_center) / init.width;
      profile[j] = std::pow(r, k) * std::exp(-t * t);
    }
    double nrm = 0.0;
    for (int j = 0; j < g.n(); ++j) nrm += g.q[j] * std::norm(profile[j]);
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) {
      throw std::invalid_argument("make_ring_state: degenerate ring profile");
    }
    profile *= init.amplitude / nrm;
    state.modes.col(K + k) = profile;
    state.modes.col(K - k) = profile.conjugate();
  }
  return state;
}

NonlinearTerms assemble_coupling(const StreamSolver& solver, const ModeState& state) {
  const RadialGrid& g = solver.grid();
  const int n = g.n();
  const int K = state.K;

  // Stream functions and their radial derivatives for every mode; the zero
  // mode only ever enters through the derivative of its breve gauge, which
  // has an exact quadrature form.
  std::vector<GridFunction> pb(2 * K + 1), dpb(2 * K + 1);
  for (int m = 1; m <= K; ++m) {
    const StreamPair pair = solver.solve(m, state.mode(m));
    pb[K + m] = pair.phi_breve;
    dpb[K + m] = differentiate(g, pair.phi_breve, 1, EndRows::one_sided);
    pb[K - m] = pair.phi_breve.conjugate();
    dpb[K - m] = dpb[K + m].conjugate();
  }
  pb[K] = GridFunction::Zero(n);
  dpb[K] = zero_mode_stream_derivative(g, state.mode(0));

  NonlinearTerms terms;
  terms.f1 = Eigen::MatrixXcd::Zero(n, 2 * K + 1);
  terms.f2 = Eigen::MatrixXcd::Zero(n, 2 * K + 1);
  const std::complex<double> iu(0.0, 1.0);

  for (int k = -K; k <= K; ++k) {
    Eigen::VectorXcd f1 = Eigen::VectorXcd::Zero(n);
    Eigen::VectorXcd f2 = Eigen::VectorXcd::Zero(n);
    const int l_lo = std::max(-K, k - K);
    const int l_hi = std::min(K, k + K);
    for (int l = l_lo; l <= l_hi; ++l) {
      const int m = k - l;
      const auto& w_l = state.modes.col(K + l);
      const auto& dpb_m = dpb[K + m];
      for (int j = 0; j < n; ++j) {
        f1[j] += iu * static_cast<double>(k) * w_l[j] * dpb_m[j] / g.r[j];
      }
      if (m != 0) {
        const auto& pb_m = pb[K + m];
        const std::complex<double> im = iu * static_cast<double>(m);
        for (int j = 0; j < n; ++j) {
          const double r = g.r[j];
          const std::complex<double> wl_pb = w_l[j] * pb_m[j];
          f1[j] += im * (0.25 - 0.5 / (r * r)) * wl_pb;
          f2[j] += im * wl_pb / r;
        }
      }
    }
    terms.f1.col(K + k) = f1;
    terms.f2.col(K + k) = f2;
  }
  return terms;
}

Stepper::Stepper(const RadialGrid& g, const FlowParams& p, int K, double dt)
    : grid_(&g), streams_(g, K), dt_(dt) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("Stepper: need a positive time step");
  }
  right_.reserve(2 * K + 1);
  left_lu_.reserve(2 * K + 1);
  for (int k = -K; k <= K; ++k) {
    const BandedComplexOperator op =
        k == 0 ? assemble_zero_mode(g, p) : assemble_Lk(g, p, k);
    BandedComplexOperator right = op;
    right.bands *= -dt / 2.0;
    right.add_to_diagonal(1.0);
    right_.push_back(std::move(right));
    BandedComplexOperator left = op;
    left.bands *= dt / 2.0;
    left.add_to_diagonal(1.0);
    left_lu_.emplace_back(left);
  }
}

void Stepper::step(ModeState& state) {
  const int K = state.K;
  const int n = state.n();
  const NonlinearTerms terms = assemble_coupling(streams_, state);

  Eigen::MatrixXcd coupling(n, 2 * K + 1);
  for (int k = -K; k <= K; ++k) {
    const GridFunction df2 = differentiate(*grid_, terms.f2.col(K + k), 1, EndRows::dirichlet);
    coupling.col(K + k) = terms.f1.col(K + k) - df2;
  }

  for (int k = -K; k <= K; ++k) {
    const int c = K + k;
    Eigen::VectorXcd explicit_part =
        have_prev_ ? Eigen::VectorXcd(1.5 * coupling.col(c) - 0.5 * prev_coupling_.col(c))
                   : Eigen::VectorXcd(coupling.col(c));
    Eigen::VectorXcd rhs = right_[c].apply(state.modes.col(c)) - dt_ * explicit_part;
    left_lu_[c].solve_in_place(rhs);
    state.modes.col(c) = rhs;
  }
  prev_coupling_ = coupling;
  have_prev_ = true;
  state.tau += dt_;

  // Restore the conjugate symmetry of a real field and record how much the
  // step drifted from it.
  double scale = 0.0;
  for (int c = 0; c < 2 * K + 1; ++c) {
    scale = std::max(scale, state.modes.col(c).norm());
  }
  double worst = 0.0;
  for (int k = 1; k <= K; ++k) {
    const Eigen::VectorXcd a = state.modes.col(K + k);
    const Eigen::VectorXcd b = state.modes.col(K - k).conjugate();
    const Eigen::VectorXcd avg = 0.5 * (a + b);
    worst = std::max(worst, 0.5 * (a - b).norm());
    state.modes.col(K + k) = avg;
    state.modes.col(K - k) = avg.conjugate();
  }
  {
    const Eigen::VectorXcd w0 = state.modes.col(K);
    worst = std::max(worst, w0.imag().matrix().norm());
    state.modes.col(K).real() = w0.real();
    state.modes.col(K).imag().setZero();
  }
  if (scale > 0.0) {
    max_sym_ = std::max(max_sym_, worst / scale);
  }
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::decayed:
      return "decayed";
    case Verdict::blowup:
      return "blowup";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

EnergyAccumulator::EnergyAccumulator(const RadialGrid& g, const FlowParams& p, int K,
                                     double c_weight)
    : grid_(&g), B_(p.B()), K_(K), c_(c_weight) {
  prev_sq_ = Eigen::MatrixXd::Zero(K + 1, 4);
  sup_terms_ = Eigen::MatrixXd::Zero(K + 1, 2);
  int_terms_ = Eigen::MatrixXd::Zero(K + 1, 4);
}

void EnergyAccumulator::add(const ModeState& state) {
  const RadialGrid& g = *grid_;
  const int n = g.n();
  Eigen::MatrixXd sq(K_ + 1, 4);
  Eigen::MatrixXd inst_sup(K_ + 1, 2);
  for (int k = 0; k <= K_; ++k) {
    const auto& w = state.modes.col(state.K + k);
    const double gw =
        k == 0 ? 1.0 : std::exp(c_ * std::cbrt(std::abs(k * B_)) * state.tau);
    double a_l2 = 0.0, a_x = 0.0, a_r2 = 0.0, sup32 = 0.0;
    for (int j = 0; j < n; ++j) {
      const double r = g.r[j];
      const double m = std::norm(w[j]);
      a_l2 += g.q[j] * m;
      a_x += g.q[j] * m / (r * r);
      a_r2 += g.q[j] * m / (r * r * r * r);
      sup32 = std::max(sup32, m / (r * r * r));
    }
    const double g2 = gw * gw;
    sq(k, 0) = g2 * a_l2;
    sq(k, 1) = g2 * a_x;
    sq(k, 2) = g2 * a_r2;
    sq(k, 3) = g2 * sup32;
    inst_sup(k, 0) = g2 * a_l2;
    inst_sup(k, 1) = g2 * a_x;
  }
  for (int k = 0; k <= K_; ++k) {
    sup_terms_(k, 0) = std::max(sup_terms_(k, 0), inst_sup(k, 0));
    sup_terms_(k, 1) = std::max(sup_terms_(k, 1), inst_sup(k, 1));
  }
  if (have_prev_) {
    const double dt = state.tau - prev_tau_;
    int_terms_ += 0.5 * dt * (prev_sq_ + sq);
  }
  prev_sq_ = sq;
  prev_tau_ = state.tau;
  have_prev_ = true;
}

EnergyReport EnergyAccumulator::report() const {
  EnergyReport rep;
  rep.c_weight = c_;
  rep.per_mode.assign(K_ + 1, 0.0);
  for (int k = 0; k <= K_; ++k) {
    const double i_l2 = std::sqrt(std::max(int_terms_(k, 0), 0.0));
    const double i_x = std::sqrt(std::max(int_terms_(k, 1), 0.0));
    const double i_r2 = std::sqrt(std::max(int_terms_(k, 2), 0.0));
    const double i_sup = std::sqrt(std::max(int_terms_(k, 3), 0.0));
    const double sup_l2 = std::sqrt(std::max(sup_terms_(k, 0), 0.0));
    const double sup_x = std::sqrt(std::max(sup_terms_(k, 1), 0.0));
    if (k == 0) {
      rep.per_mode[k] = std::pow(std::abs(B_), 1.0 / 6.0) * (sup_x + i_sup + i_r2 + i_l2);
    } else {
      const double kb = std::abs(k * B_);
      const double sixth = std::pow(kb, 1.0 / 6.0);
      const double third = std::cbrt(kb);
      const double ak = k;
      rep.per_mode[k] = sup_l2 +
                        sixth * (i_l2 + sup_x + ak * i_r2 + std::sqrt(ak) * i_sup) +
                        third * i_x;
      rep.total_nonzero += 2.0 * rep.per_mode[k];
    }
  }
  rep.finite = std::isfinite(rep.total_nonzero) && std::isfinite(rep.per_mode[0]);
  if (K_ >= 1) {
    rep.finite = rep.finite && rep.total_nonzero > 0.0;
  }
  return rep;
}

SimRecord simulate(const RadialGrid& g, const FlowParams& p, int K,
                   const RingInitialData& init, const SimOptions& opt) {
  SimRecord rec;
  ModeState state = make_ring_state(g, p, K, init);
  Stepper stepper(g, p, K, opt.dt);
  EnergyAccumulator energy(g, p, K, opt.c_weight);

  const int steps = static_cast<int>(std::llround(opt.tau_end / opt.dt));
  const int stride = std::max(1, opt.store_stride);

  double initial_total = 0.0;
  for (int k = -K; k <= K; ++k) initial_total += column_l2(g, state.modes, K + k);
  rec.initial_nonzero = nonzero_mode_sum(g, state);

  std::vector<double> nz_trace;
  std::vector<double> nz_tau;
  auto sample = [&](const ModeState& s) {
    rec.tau.push_back(s.tau);
    const int row = static_cast<int>(rec.tau.size()) - 1;
    rec.mode_l2.conservativeResize(row + 1, K + 1);
    for (int k = 0; k <= K; ++k) {
      rec.mode_l2(row, k) = column_l2(g, s.modes, K + k);
    }
  };

  sample(state);
  if (opt.track_energy) energy.add(state);
  nz_trace.push_back(rec.initial_nonzero);
  nz_tau.push_back(0.0);

  Verdict verdict = Verdict::inconclusive;
  int step = 0;
  for (step = 1; step <= steps; ++step) {
    stepper.step(state);
    if (!state.modes.allFinite()) {
      verdict = Verdict::blowup;
      sample(state);
      break;
    }
    if (opt.track_energy) energy.add(state);
    const double nz = nonzero_mode_sum(g, state);
    nz_trace.push_back(nz);
    nz_tau.push_back(state.tau);
    if (step % stride == 0 || step == steps) sample(state);

    double total = 0.0;
    for (int k = -K; k <= K; ++k) total += column_l2(g, state.modes, K + k);
    if (initial_total > 0.0 && total > opt.blowup_factor * initial_total) {
      verdict = Verdict::blowup;
      break;
    }
  }
  rec.steps_taken = std::min(step, steps);
  rec.final_nonzero = nonzero_mode_sum(g, state);
  if (verdict != Verdict::blowup) {
    if (rec.initial_nonzero > 0.0 &&
        rec.final_nonzero <= opt.decay_threshold * rec.initial_nonzero) {
      verdict = Verdict::decayed;
    }
  }
  rec.verdict = verdict;
  rec.max_reality_correction = stepper.max_reality_correction();
  const DecayFit fit = fit_decay(nz_tau, nz_trace, opt.tau_end / 4.0);
  rec.fitted_rate = fit.rate;
  if (opt.track_energy) rec.energy = energy.report();
  return rec;
}

SweepResult threshold_sweep(const RadialGrid& g, const std::vector<double>& b_values,
                            const SweepOptions& opt) {
  SweepResult result;
  for (const double b : b_values) {
    const FlowParams p = FlowParams::from_B(b);
    RingInitialData init;
    auto run = [&](double amp) {
      init.amplitude = amp;
      const SimRecord rec = simulate(g, p, opt.K, init, opt.sim);
      result.rows.push_back(SweepRow{b, amp, rec.verdict, rec.fitted_rate});
      return rec.verdict;
    };

    double amp = opt.amp_lo;
    Verdict v = run(amp);
    double last_decayed = v == Verdict::decayed ? amp : 0.0;
    double first_bad = 0.0;
    if (v == Verdict::decayed) {
      while (amp < opt.amp_cap) {
        amp *= opt.ramp_factor;
        v = run(amp);
        if (v != Verdict::decayed) {
          first_bad = amp;
          break;
        }
        last_decayed = amp;
      }
      if (first_bad == 0.0) {
        result.capped = true;
        result.flags.push_back(fmt::format("amplitude-cap at B={}", b));
        result.thresholds.emplace_back(b, last_decayed);
        continue;
      }
    } else {
      while (amp > opt.amp_lo * 1e-6) {
        first_bad = amp;
        amp /= opt.ramp_factor;
        v = run(amp);
        if (v == Verdict::decayed) {
          last_decayed = amp;
          break;
        }
      }
      if (last_decayed == 0.0) {
        result.flags.push_back(fmt::format("below-range at B={}", b));
        continue;
      }
    }
    for (int it = 0; it < opt.bisect_iters; ++it) {
      const double mid = std::sqrt(last_decayed * first_bad);
      if (run(mid) == Verdict::decayed) {
        last_decayed = mid;
      } else {
        first_bad = mid;
      }
    }
    result.thresholds.emplace_back(b, last_decayed);
  }

  if (result.thresholds.size() >= 2 && !result.capped) {
    std::vector<double> bs, amps;
    for (const auto& [b, a] : result.thresholds) {
      bs.push_back(std::abs(b));
      amps.push_back(a);
    }
    result.slope = fit_loglog(bs, amps).slope;
  }
  return result;
}

PhysicalReport translate_physical(const RadialGrid& g, const ModeState& state) {
  PhysicalReport rep;
  rep.t = std::exp(state.tau);
  rep.nu = state.params.nu;
  rep.threshold_scale =
      std::cbrt(std::abs(state.params.A2)) * std::pow(state.params.nu, 2.0 / 3.0);
  rep.m_norms.assign(state.K + 1, 0.0);
  for (int k = 0; k <= state.K; ++k) {
    rep.m_norms[k] = column_l2(g, state.modes, state.K + k);
  }
  double x0 = 0.0;
  for (int j = 0; j < g.n(); ++j) {
    x0 += g.q[j] * std::norm(state.modes(j, state.K)) / (g.r[j] * g.r[j]);
  }
  double nonzero = 0.0;
  for (int k = 1; k <= state.K; ++k) nonzero += 2.0 * rep.m_norms[k];
  rep.l1_bound = 2.0 * std::numbers::pi * rep.nu *
                 (std::sqrt(8.0) * std::sqrt(x0) + std::sqrt(2.0) * nonzero);
  return rep;
}

}  // namespace couette
