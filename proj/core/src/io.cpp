#include "couette/io.hpp"

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <fmt/format.h>

#if __has_include(<nlohmann/json.hpp>)
#include <nlohmann/json.hpp>
#else
#include "json.hpp"
#endif

#include "couette/fit.hpp"

namespace couette {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json meta_block(const RunMeta& meta) {
  ordered_json j;
  j["command"] = meta.command;
  j["config"] = meta.config;
  j["config_hash"] = config_hash(meta.config);
  j["n"] = meta.n;
  j["r_max"] = meta.r_max;
  j["scheme"] = meta.scheme;
  j["version"] = version_string();
  return j;
}

std::string csv_preamble(const RunMeta& meta) {
  std::string out;
  out += fmt::format("# command={}\n", meta.command);
  out += fmt::format("# config={}\n", meta.config);
  out += fmt::format("# config_hash={}\n", config_hash(meta.config));
  out += fmt::format("# n={}\n", meta.n);
  out += fmt::format("# r_max={:.17g}\n", meta.r_max);
  out += fmt::format("# scheme={}\n", meta.scheme);
  out += fmt::format("# version={}\n", version_string());
  return out;
}

}  // namespace

std::string version_string() { return "0.1.0"; }

std::string config_hash(const std::string& canonical) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (const unsigned char c : canonical) {
    hash ^= static_cast<std::uint64_t>(c);
    hash *= 0x100000001b3ull;
  }
  return fmt::format("{:016x}", hash);
}

std::string default_output_dir() {
  const char* dir = std::getenv("COUETTE_OUT_DIR");
  return dir && *dir ? std::string(dir) : std::string(".");
}

std::string scan_to_json(const ScanResult& scan, const RunMeta& meta) {
  ordered_json j;
  j["meta"] = meta_block(meta);
  j["k"] = scan.k;
  j["B"] = scan.B;
  j["pair"] = to_string(scan.pair);
  j["psi"] = scan.psi;
  j["psi_shift"] = scan.psi_shift;
  j["sigma_evaluations"] = scan.sigma_evaluations;
  j["flags"] = scan.flags;
  j["shifts"] = scan.shifts;
  j["sigma_min"] = scan.sigma_min;
  return j.dump(2) + "\n";
}

std::string scan_to_csv(const ScanResult& scan, const RunMeta& meta) {
  std::string out = csv_preamble(meta);
  out += fmt::format("# k={}\n", scan.k);
  out += fmt::format("# B={:.17g}\n", scan.B);
  out += fmt::format("# pair={}\n", to_string(scan.pair));
  out += fmt::format("# psi={:.17g}\n", scan.psi);
  out += fmt::format("# psi_shift={:.17g}\n", scan.psi_shift);
  for (const auto& flag : scan.flags) {
    out += fmt::format("# flag={}\n", flag);
  }
  out += "shift,sigma_min\n";
  for (std::size_t i = 0; i < scan.shifts.size(); ++i) {
    out += fmt::format("{:.17g},{:.17g}\n", scan.shifts[i], scan.sigma_min[i]);
  }
  return out;
}

std::string scaling_fit_to_json(const std::vector<ScanResult>& scans, const RunMeta& meta) {
  ordered_json j;
  j["meta"] = meta_block(meta);
  ordered_json points = ordered_json::array();
  std::vector<double> betas, psis;
  for (const auto& scan : scans) {
    ordered_json p;
    p["k"] = scan.k;
    p["B"] = scan.B;
    p["beta"] = std::abs(static_cast<double>(scan.k) * scan.B);
    p["pair"] = to_string(scan.pair);
    p["psi"] = scan.psi;
    p["psi_shift"] = scan.psi_shift;
    p["flags"] = scan.flags;
    points.push_back(p);
    if (scan.psi > 0.0) {
      betas.push_back(std::abs(static_cast<double>(scan.k) * scan.B));
      psis.push_back(scan.psi);
    }
  }
  j["points"] = points;
  if (betas.size() >= 2) {
    const LineFit fit = fit_loglog(betas, psis);
    j["slope"] = fit.slope;
    j["intercept"] = fit.intercept;
    j["rms_residual"] = fit.rms_residual;
    j["fit_points"] = fit.points;
  }
  return j.dump(2) + "\n";
}

std::string trajectory_to_csv(const Trajectory& t, const RunMeta& meta) {
  std::string out = csv_preamble(meta);
  out += fmt::format("# k={}\n", t.k);
  out += fmt::format("# B={:.17g}\n", t.B);
  out += fmt::format("# dt={:.17g}\n", t.dt);
  out += "tau,l2,x\n";
  for (std::size_t i = 0; i < t.tau.size(); ++i) {
    out += fmt::format("{:.17g},{:.17g},{:.17g}\n", t.tau[i], t.l2[i], t.x[i]);
  }
  return out;
}

std::string decay_check_to_json(const SemigroupCheckResult& r, const RunMeta& meta) {
  ordered_json j;
  j["meta"] = meta_block(meta);
  j["pass"] = r.pass;
  j["k"] = r.k;
  j["B"] = r.B;
  j["psi"] = r.psi;
  j["max_excess"] = r.max_excess;
  j["tau_worst"] = r.tau_worst;
  j["fitted_rate"] = r.fitted_rate;
  j["n_states"] = r.n_states;
  j["fit"] = {
      {"rate", r.envelope_fit.rate},
      {"prefactor", r.envelope_fit.prefactor},
      {"rms_residual", r.envelope_fit.rms_residual},
      {"window_start", r.envelope_fit.window_start},
      {"window_end", r.envelope_fit.window_end},
      {"points", r.envelope_fit.points},
  };
  j["tau"] = r.tau;
  j["envelope"] = r.envelope;
  return j.dump(2) + "\n";
}

std::string simulation_to_csv(const SimRecord& rec, const RunMeta& meta) {
  std::string out = csv_preamble(meta);
  out += fmt::format("# verdict={}\n", to_string(rec.verdict));
  out += fmt::format("# initial_nonzero={:.17g}\n", rec.initial_nonzero);
  out += fmt::format("# final_nonzero={:.17g}\n", rec.final_nonzero);
  out += fmt::format("# fitted_rate={:.17g}\n", rec.fitted_rate);
  out += fmt::format("# max_reality_correction={:.17g}\n", rec.max_reality_correction);
  out += fmt::format("# steps_taken={}\n", rec.steps_taken);
  const int cols = static_cast<int>(rec.mode_l2.cols());
  out += "tau";
  for (int k = 0; k < cols; ++k) {
    out += fmt::format(",l2_mode{}", k);
  }
  out += "\n";
  for (std::size_t i = 0; i < rec.tau.size(); ++i) {
    out += fmt::format("{:.17g}", rec.tau[i]);
    for (int k = 0; k < cols; ++k) {
      out += fmt::format(",{:.17g}", rec.mode_l2(static_cast<int>(i), k));
    }
    out += "\n";
  }
  return out;
}

std::string simulation_to_json(const SimRecord& rec, const RunMeta& meta) {
  ordered_json j;
  j["meta"] = meta_block(meta);
  j["verdict"] = to_string(rec.verdict);
  j["initial_nonzero"] = rec.initial_nonzero;
  j["final_nonzero"] = rec.final_nonzero;
  j["fitted_rate"] = rec.fitted_rate;
  j["max_reality_correction"] = rec.max_reality_correction;
  j["steps_taken"] = rec.steps_taken;
  j["energy"] = {
      {"c_weight", rec.energy.c_weight},
      {"per_mode", rec.energy.per_mode},
      {"total_nonzero", rec.energy.total_nonzero},
      {"finite", rec.energy.finite},
  };
  j["tau"] = rec.tau;
  ordered_json modes = ordered_json::array();
  for (int k = 0; k < rec.mode_l2.cols(); ++k) {
    std::vector<double> column(rec.mode_l2.rows());
    for (int i = 0; i < rec.mode_l2.rows(); ++i) column[i] = rec.mode_l2(i, k);
    modes.push_back(column);
  }
  j["mode_l2"] = modes;
  return j.dump(2) + "\n";
}

std::string sweep_to_csv(const SweepResult& sw, const RunMeta& meta) {
  std::string out = csv_preamble(meta);
  out += fmt::format("# slope={:.17g}\n", sw.slope);
  out += fmt::format("# capped={}\n", sw.capped ? "true" : "false");
  for (const auto& flag : sw.flags) {
    out += fmt::format("# flag={}\n", flag);
  }
  out += "B,amplitude,verdict,fitted_rate\n";
  for (const auto& row : sw.rows) {
    out += fmt::format("{:.17g},{:.17g},{},{:.17g}\n", row.B, row.amplitude,
                       to_string(row.verdict), row.fitted_rate);
  }
  return out;
}

std::string sweep_to_json(const SweepResult& sw, const RunMeta& meta) {
  ordered_json j;
  j["meta"] = meta_block(meta);
  j["slope"] = sw.slope;
  j["capped"] = sw.capped;
  j["flags"] = sw.flags;
  ordered_json thresholds = ordered_json::array();
  for (const auto& [b, amp] : sw.thresholds) {
    thresholds.push_back({{"B", b}, {"threshold", amp}});
  }
  j["thresholds"] = thresholds;
  ordered_json rows = ordered_json::array();
  for (const auto& row : sw.rows) {
    rows.push_back({{"B", row.B},
                    {"amplitude", row.amplitude},
                    {"verdict", to_string(row.verdict)},
                    {"fitted_rate", row.fitted_rate}});
  }
  j["rows"] = rows;
  return j.dump(2) + "\n";
}

std::string write_report(const std::string& dir, const std::string& name,
                         const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target = fs::path(dir) / name;
  if (!target.parent_path().empty()) {
    fs::create_directories(target.parent_path());
  }
  std::ofstream out(target, std::ios::binary);
  if (!out) {
    throw std::runtime_error(fmt::format("write_report: cannot open '{}'", target.string()));
  }
  out << content;
  out.close();
  if (!out) {
    throw std::runtime_error(fmt::format("write_report: short write to '{}'", target.string()));
  }
  return target.string();
}

}  // namespace couette
