#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "couette/fit.hpp"
#include "couette/grid.hpp"
#include "couette/io.hpp"
#include "couette/nonlinear.hpp"
#include "couette/operators.hpp"
#include "couette/oracles.hpp"
#include "couette/resolvent.hpp"
#include "couette/semigroup.hpp"
#include "couette/stream.hpp"

namespace {

struct CommonOptions {
  int n = 512;
  double r_max = 20.0;
  std::string scheme = "uniform";
  std::string out_dir = couette::default_output_dir();
};

void add_common(CLI::App* cmd, CommonOptions* common) {
  cmd->add_option("--n", common->n, "radial grid size")->check(CLI::PositiveNumber);
  cmd->add_option("--r-max", common->r_max, "outer radius of the grid");
  cmd->add_option("--scheme", common->scheme, "grid scheme")
      ->check(CLI::IsMember({"uniform", "stretched"}));
  cmd->add_option("--out-dir", common->out_dir, "directory for report files");
}

couette::RadialGrid make_grid(const CommonOptions& common) {
  const couette::GridScheme scheme = common.scheme == "stretched"
                                         ? couette::GridScheme::stretched
                                         : couette::GridScheme::uniform;
  return couette::build_grid(common.n, common.r_max, scheme);
}

couette::RunMeta make_meta(const std::string& command, const std::string& config,
                           const CommonOptions& common) {
  couette::RunMeta meta;
  meta.command = command;
  meta.config = config;
  meta.n = common.n;
  meta.r_max = common.r_max;
  meta.scheme = common.scheme;
  return meta;
}

std::string b_tag(double b) {
  std::string tag = fmt::format("{:g}", b);
  for (auto& c : tag) {
    if (c == '+') c = 'p';
    if (c == '-') c = 'm';
    if (c == '.') c = '_';
  }
  return tag;
}

int run_resolvent(const CommonOptions& common, int k, const std::vector<double>& b_values,
                  const std::string& pair_name, int coarse_points) {
  const couette::RadialGrid g = make_grid(common);
  const couette::NormPair pair = couette::norm_pair_from_string(pair_name);

  std::vector<couette::ScanResult> scans;
  for (const double b : b_values) {
    const couette::FlowParams p = couette::FlowParams::from_B(b);
    couette::ScanOptions opt;
    opt.pair = pair;
    opt.coarse_points = coarse_points;
    const couette::ScanResult scan = couette::pseudospectral_bound(g, p, k, opt);
    scans.push_back(scan);
    fmt::print("B={:<12g} psi={:.8e} at shift {:.6e} ({} evaluations)\n", b, scan.psi,
               scan.psi_shift, scan.sigma_evaluations);
    for (const auto& flag : scan.flags) {
      fmt::print("  note: {}\n", flag);
    }

    const std::string config =
        fmt::format("cmd=resolvent;k={};B={:.17g};pair={};n={};r_max={:.17g};scheme={}", k,
                    b, pair_name, common.n, common.r_max, common.scheme);
    const couette::RunMeta meta = make_meta("resolvent", config, common);
    couette::write_report(common.out_dir, fmt::format("scan_k{}_B{}.json", k, b_tag(b)),
                          couette::scan_to_json(scan, meta));
    couette::write_report(common.out_dir, fmt::format("scan_k{}_B{}.csv", k, b_tag(b)),
                          couette::scan_to_csv(scan, meta));
  }

  if (scans.size() >= 2) {
    std::vector<double> betas, psis;
    for (const auto& s : scans) {
      betas.push_back(std::abs(static_cast<double>(s.k) * s.B));
      psis.push_back(s.psi);
    }
    const couette::LineFit fit = couette::fit_loglog(betas, psis);
    fmt::print("log-log slope of psi against |kB|: {:.4f} (rms {:.2e})\n", fit.slope,
               fit.rms_residual);
    const std::string config =
        fmt::format("cmd=resolvent-fit;k={};pair={};n={};r_max={:.17g};scheme={}", k,
                    pair_name, common.n, common.r_max, common.scheme);
    couette::write_report(common.out_dir, fmt::format("scaling_k{}.json", k),
                          couette::scaling_fit_to_json(scans, make_meta("resolvent", config,
                                                                        common)));
  }
  return 0;
}

int run_semigroup(const CommonOptions& common, int k, double b, int n_states, int steps,
                  double tau_mult) {
  const couette::RadialGrid g = make_grid(common);
  const couette::FlowParams p = couette::FlowParams::from_B(b);

  couette::ScanOptions scan_opt;
  const couette::ScanResult scan = couette::pseudospectral_bound(g, p, k, scan_opt);
  fmt::print("psi = {:.8e}\n", scan.psi);

  couette::SemigroupCheckOptions opt;
  opt.n_states = n_states;
  opt.steps = steps;
  opt.tau_end_over_psi = tau_mult;
  const couette::SemigroupCheckResult check =
      couette::decay_envelope_check(g, p, k, scan.psi, opt);
  fmt::print("envelope within bound: {} (max excess {:.3e} at tau {:.3f})\n",
             check.pass ? "yes" : "NO", check.max_excess, check.tau_worst);
  fmt::print("fitted tail rate {:.6e} against psi {:.6e}\n", check.fitted_rate, check.psi);

  const std::string config =
      fmt::format("cmd=semigroup;k={};B={:.17g};states={};steps={};n={};r_max={:.17g};scheme={}",
                  k, b, n_states, steps, common.n, common.r_max, common.scheme);
  couette::write_report(common.out_dir, fmt::format("decay_k{}_B{}.json", k, b_tag(b)),
                        couette::decay_check_to_json(check, make_meta("semigroup", config,
                                                                      common)));
  return check.pass ? 0 : 1;
}

int run_simulate(const CommonOptions& common, double b, int k_max, double amplitude,
                 double tau_end, double dt, double r_center, double width,
                 double c_weight) {
  const couette::RadialGrid g = make_grid(common);
  const couette::FlowParams p = couette::FlowParams::from_B(b);

  couette::RingInitialData init;
  init.amplitude = amplitude;
  init.r_center = r_center;
  init.width = width;

  couette::SimOptions opt;
  opt.tau_end = tau_end;
  opt.dt = dt;
  opt.c_weight = c_weight;

  const couette::SimRecord rec = couette::simulate(g, p, k_max, init, opt);
  fmt::print("verdict: {} after {} steps\n", couette::to_string(rec.verdict),
             rec.steps_taken);
  fmt::print("nonzero-mode mass {:.6e} -> {:.6e}, trailing rate {:.6e}\n",
             rec.initial_nonzero, rec.final_nonzero, rec.fitted_rate);
  fmt::print("max reality correction {:.3e}\n", rec.max_reality_correction);
  if (!rec.energy.per_mode.empty()) {
    fmt::print("weighted energies (c={:g}): zero-mode {:.6e}, nonzero total {:.6e}{}\n",
               rec.energy.c_weight, rec.energy.per_mode[0], rec.energy.total_nonzero,
               rec.energy.finite ? "" : " [not finite]");
  }

  const std::string config = fmt::format(
      "cmd=simulate;B={:.17g};K={};amp={:.17g};tau_end={:.17g};dt={:.17g};rc={:.17g};"
      "width={:.17g};c={:.17g};n={};r_max={:.17g};scheme={}",
      b, k_max, amplitude, tau_end, dt, r_center, width, c_weight, common.n, common.r_max,
      common.scheme);
  const couette::RunMeta meta = make_meta("simulate", config, common);
  couette::write_report(common.out_dir, fmt::format("sim_B{}_amp{}.csv", b_tag(b),
                                                    b_tag(amplitude)),
                        couette::simulation_to_csv(rec, meta));
  couette::write_report(common.out_dir, fmt::format("sim_B{}_amp{}.json", b_tag(b),
                                                    b_tag(amplitude)),
                        couette::simulation_to_json(rec, meta));
  return 0;
}

int run_sweep(const CommonOptions& common, const std::vector<double>& b_values, int k_max,
              double amp_lo, double amp_cap, double tau_end, double dt) {
  const couette::RadialGrid g = make_grid(common);
  couette::SweepOptions opt;
  opt.K = k_max;
  opt.amp_lo = amp_lo;
  opt.amp_cap = amp_cap;
  opt.sim.tau_end = tau_end;
  opt.sim.dt = dt;
  opt.sim.track_energy = false;

  const couette::SweepResult sweep = couette::threshold_sweep(g, b_values, opt);
  for (const auto& [b, threshold] : sweep.thresholds) {
    fmt::print("B={:<12g} threshold amplitude {:.6e}\n", b, threshold);
  }
  for (const auto& flag : sweep.flags) {
    fmt::print("note: {}\n", flag);
  }
  if (sweep.thresholds.size() >= 2 && !sweep.capped) {
    fmt::print("log-log slope of threshold against B: {:.4f}\n", sweep.slope);
  }

  std::string b_list;
  for (const double b : b_values) b_list += fmt::format("{:.17g},", b);
  const std::string config = fmt::format(
      "cmd=sweep;B=[{}];K={};amp_lo={:.17g};amp_cap={:.17g};tau_end={:.17g};dt={:.17g};"
      "n={};r_max={:.17g};scheme={}",
      b_list, k_max, amp_lo, amp_cap, tau_end, dt, common.n, common.r_max, common.scheme);
  const couette::RunMeta meta = make_meta("sweep", config, common);
  couette::write_report(common.out_dir, "sweep.csv", couette::sweep_to_csv(sweep, meta));
  couette::write_report(common.out_dir, "sweep.json", couette::sweep_to_json(sweep, meta));
  return 0;
}

int run_verify() {
  int failures = 0;
  const auto check = [&failures](const std::string& name, bool ok,
                                 const std::string& detail) {
    fmt::print("[{}] {}{}\n", ok ? "ok" : "FAIL", name,
               detail.empty() ? "" : " (" + detail + ")");
    if (!ok) ++failures;
  };

  const couette::RadialGrid g = couette::build_grid(256, 20.0);

  {
    const double total = g.q.sum();
    check("quadrature weights cover the domain", std::abs(total - g.r_max) < 1e-12,
          fmt::format("sum {:.17g}", total));
  }
  {
    const std::string h = couette::config_hash("a");
    check("configuration hash reference vector", h == "af63dc4c8601ec8c", h);
  }
  {
    const couette::FlowParams p = couette::FlowParams::from_B(0.0);
    const couette::CoercivityReport rep = couette::coercivity_audit(g, p, 1, 32, 7);
    check("operator coercivity at the first wavenumber", rep.min_rayleigh >= 0.49,
          fmt::format("min Rayleigh {:.6f}", rep.min_rayleigh));
  }
  {
    const couette::RadialGrid g128 = couette::build_grid(128, 16.0);
    const couette::FlowParams p = couette::FlowParams::from_B(50.0);
    couette::SigmaMinOptions opt;
    const couette::SigmaMinResult iter =
        couette::resolvent_norm_at(g128, p, 1, 25.0, couette::NormPair::l2_to_l2, opt,
                                   nullptr);
    const double dense =
        couette::oracle::dense_sigma_min(g128, p, 1, 25.0, couette::NormPair::l2_to_l2);
    const double rel = std::abs(iter.sigma - dense) / dense;
    check("iterative smallest singular value against dense reference", rel < 1e-8,
          fmt::format("rel {:.2e}", rel));
  }
  {
    couette::StreamSolver solver(g, 2);
    const double c0 = 6.0, s0 = 0.8;
    couette::GridFunction w(g.n());
    for (int j = 0; j < g.n(); ++j) {
      const double t = (g.r[j] - c0) / s0;
      w[j] = std::exp(-t * t);
    }
    const couette::StreamPair pair = solver.solve(2, w);
    const couette::GridFunction ref = couette::oracle::greens_stream(
        g, 2, [&](double r) { return std::complex<double>(std::exp(-((r - c0) / s0) *
                                                                   ((r - c0) / s0)),
                                                          0.0); });
    const double rel = (pair.phi - ref).norm() / ref.norm();
    check("banded stream solve against kernel reference", rel < 1e-4,
          fmt::format("rel {:.2e}", rel));
  }
  {
    const auto sol = couette::oracle::riccati_g(1.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < sol.r.size(); ++i) {
      worst = std::max(worst, std::abs(sol.g[i] - sol.r[i] / sol.r[0] * sol.g[0]));
    }
    check("slope-field transport reproduces the linear profile",
          sol.residual < 1e-10 && worst < 1e-8,
          fmt::format("residual {:.2e}, profile dev {:.2e}", sol.residual, worst));
  }
  {
    const double m3 = couette::oracle::gaussian_moment_cubed();
    const double m1 = couette::oracle::gaussian_moment_first();
    check("Gaussian moments for the physical translation",
          std::abs(m3 - 8.0) < 1e-8 && std::abs(m1 - 2.0) < 1e-8,
          fmt::format("{:.12g}, {:.12g}", m3, m1));
  }
  {
    const couette::FlowParams p = couette::FlowParams::from_B(100.0);
    couette::RingInitialData init;
    init.amplitude = 1e-4;
    couette::SimOptions opt;
    opt.tau_end = 0.06;
    opt.dt = 2e-3;
    opt.track_energy = false;
    const couette::SimRecord rec = couette::simulate(g, p, 4, init, opt);
    check("mode stack stays a real field", rec.max_reality_correction < 1e-12,
          fmt::format("max correction {:.2e}", rec.max_reality_correction));
  }

  fmt::print("{}\n", failures == 0 ? "verify: all checks passed"
                                   : fmt::format("verify: {} check(s) failed", failures));
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stability laboratory for swirling flows in self-similar variables"};
  app.require_subcommand(1);

  CommonOptions resolvent_common;
  int resolvent_k = 1;
  std::vector<double> resolvent_b = {1e3};
  std::string resolvent_pair = "l2";
  int resolvent_points = 128;
  CLI::App* resolvent = app.add_subcommand(
      "resolvent", "Scan the shifted operator for its pseudospectral bound");
  add_common(resolvent, &resolvent_common);
  resolvent->add_option("--k", resolvent_k, "angular wavenumber");
  resolvent->add_option("--b", resolvent_b, "circulation ratios to scan");
  resolvent->add_option("--pair", resolvent_pair, "norm pair")
      ->check(CLI::IsMember({"l2", "x", "hm1-shifted", "x-hm1-shifted"}));
  resolvent->add_option("--points", resolvent_points, "coarse shifts per sign");

  CommonOptions semigroup_common;
  int semigroup_k = 1;
  double semigroup_b = 1e3;
  int semigroup_states = 20;
  int semigroup_steps = 1500;
  double semigroup_tau_mult = 5.0;
  CLI::App* semigroup =
      app.add_subcommand("semigroup", "Check propagator decay against the resolvent bound");
  add_common(semigroup, &semigroup_common);
  semigroup->add_option("--k", semigroup_k, "angular wavenumber");
  semigroup->add_option("--b", semigroup_b, "circulation ratio");
  semigroup->add_option("--states", semigroup_states, "number of random initial states");
  semigroup->add_option("--steps", semigroup_steps, "time steps per trajectory");
  semigroup->add_option("--tau-mult", semigroup_tau_mult, "horizon in units of 1/psi");

  CommonOptions simulate_common;
  double simulate_b = 1e3;
  int simulate_kmax = 8;
  double simulate_amp = 1e-3;
  double simulate_tau_end = 4.0;
  double simulate_dt = 2e-3;
  double simulate_rc = 5.0;
  double simulate_width = 1.0;
  double simulate_c = 0.0;
  CLI::App* simulate =
      app.add_subcommand("simulate", "Run the coupled nonlinear mode system");
  add_common(simulate, &simulate_common);
  simulate->add_option("--b", simulate_b, "circulation ratio");
  simulate->add_option("--kmax", simulate_kmax, "largest retained wavenumber");
  simulate->add_option("--amp", simulate_amp, "ring amplitude");
  simulate->add_option("--tau-end", simulate_tau_end, "horizon in slow time");
  simulate->add_option("--dt", simulate_dt, "time step");
  simulate->add_option("--rc", simulate_rc, "ring center radius");
  simulate->add_option("--width", simulate_width, "ring width");
  simulate->add_option("--cweight", simulate_c, "energy weight coefficient");

  CommonOptions sweep_common;
  std::vector<double> sweep_b = {1e2, 1e3};
  int sweep_kmax = 8;
  double sweep_amp_lo = 1e-2;
  double sweep_amp_cap = 1e4;
  double sweep_tau_end = 4.0;
  double sweep_dt = 2e-3;
  CLI::App* sweep =
      app.add_subcommand("sweep", "Find amplitude thresholds across circulation ratios");
  add_common(sweep, &sweep_common);
  sweep->add_option("--b", sweep_b, "circulation ratios");
  sweep->add_option("--kmax", sweep_kmax, "largest retained wavenumber");
  sweep->add_option("--amp-lo", sweep_amp_lo, "starting amplitude");
  sweep->add_option("--amp-cap", sweep_amp_cap, "amplitude cap");
  sweep->add_option("--tau-end", sweep_tau_end, "horizon per run");
  sweep->add_option("--dt", sweep_dt, "time step");

  CLI::App* verify = app.add_subcommand("verify", "Run the quick self-check battery");
  bool verify_quick = true;
  verify->add_flag("--quick", verify_quick, "short battery (default)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (resolvent->parsed()) {
      return run_resolvent(resolvent_common, resolvent_k, resolvent_b, resolvent_pair,
                           resolvent_points);
    }
    if (semigroup->parsed()) {
      return run_semigroup(semigroup_common, semigroup_k, semigroup_b, semigroup_states,
                           semigroup_steps, semigroup_tau_mult);
    }
    if (simulate->parsed()) {
      return run_simulate(simulate_common, simulate_b, simulate_kmax, simulate_amp,
                          simulate_tau_end, simulate_dt, simulate_rc, simulate_width,
                          simulate_c);
    }
    if (sweep->parsed()) {
      return run_sweep(sweep_common, sweep_b, sweep_kmax, sweep_amp_lo, sweep_amp_cap,
                       sweep_tau_end, sweep_dt);
    }
    if (verify->parsed()) {
      return run_verify();
    }
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 0;
}
