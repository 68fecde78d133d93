#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uavharvest/config.hpp"

namespace uavharvest {

constexpr std::uint64_t kDefaultSeed = UINT64_C(0x5EEDC0DE);

std::string tool_version();

struct SweepSpec {
  std::string variable;
  std::vector<double> grid;  // non-empty, strictly increasing
};

// A runnable experiment: an id from
//   laplace | coverage | rate | harvest | optimize | transport | sinr | 2d |
//   figure:<3|4|5|6|7|8|9|10|11>
// plus the resolved config, sweep grids, seed/trials, and output directory.
struct ExperimentSpec {
  std::string id;
  std::string label;  // output file stem
  NetworkConfig cfg;
  ModulationRule modulation = ModulationRule::derived();
  SweepSpec sweep;        // primary axis
  SweepSpec sweep2;       // secondary axis (surfaces); may be empty
  std::string out_dir = "out";
  std::uint64_t seed = kDefaultSeed;
  long trials = 100000;
  int k_sim = 64;
  double slot_duration_s = 0.0;  // harvest; 0 -> w/(100 v)
  double opt_tolerance_m = 1.0;  // optimize
  bool verify = false;           // fail the run beyond 5 SE disagreement
};

struct RunSummary {
  std::vector<std::string> csv_paths;
  std::string manifest_path;
  bool verify_ok = true;
  std::vector<std::string> verify_failures;
  double wall_ms = 0.0;
};

// Fully-pinned presets for the named figures; every parameter resolved.
ExperimentSpec figure_preset(int figure);

// Named experiments map onto figure presets or standalone defaults.
ExperimentSpec default_experiment(const std::string& id);

// Executes the experiment: one CSV per metric (parameter columns, analytic
// value, analytic error budget, MC mean, MC SE, trials, seed) plus a JSON
// run manifest. CSV bodies are byte-reproducible given (spec, seed).
RunSummary run_experiment(const ExperimentSpec& spec);

struct VerifyCheck {
  std::string config_name;
  std::string check;
  bool pass = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool all_pass = true;
  std::string report_path;
  std::vector<std::string> csv_paths;
};

// Runs the analytic-vs-MC agreement suite and the invariant suite over every
// *.json config in config_dir; writes a machine-readable report plus one
// summary CSV per config.
VerifyReport verify_all(const std::string& config_dir,
                        const std::string& out_dir, long trials,
                        std::uint64_t seed);

}  // namespace uavharvest
