#pragma once

#include <string>

#include "couette/nonlinear.hpp"
#include "couette/resolvent.hpp"
#include "couette/semigroup.hpp"

namespace couette {

std::string version_string();  // library version, "0.1.0"

// 64-bit FNV-1a of a canonical configuration string, as fixed-width hex.
std::string config_hash(const std::string& canonical);

// Target directory for reports: $COUETTE_OUT_DIR if set, else the working
// directory.
std::string default_output_dir();

// Provenance block stamped into every report.
struct RunMeta {
  std::string command;    // subcommand or test that produced the file
  std::string config;     // canonical key=value configuration string
  int n = 0;
  double r_max = 0.0;
  std::string scheme;
};

std::string scan_to_json(const ScanResult& scan, const RunMeta& meta);
std::string scan_to_csv(const ScanResult& scan, const RunMeta& meta);
std::string scaling_fit_to_json(const std::vector<ScanResult>& scans, const RunMeta& meta);
std::string trajectory_to_csv(const Trajectory& t, const RunMeta& meta);
std::string decay_check_to_json(const SemigroupCheckResult& r, const RunMeta& meta);
std::string simulation_to_csv(const SimRecord& rec, const RunMeta& meta);
std::string simulation_to_json(const SimRecord& rec, const RunMeta& meta);
std::string sweep_to_csv(const SweepResult& sw, const RunMeta& meta);
std::string sweep_to_json(const SweepResult& sw, const RunMeta& meta);

// Writes content to dir/name, creating the directory if needed; returns the
// full path.
std::string write_report(const std::string& dir, const std::string& name,
                         const std::string& content);

}  // namespace couette
