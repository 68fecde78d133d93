#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uavharvest/experiments.hpp"
#include "uavharvest/optimize.hpp"
#include "uavharvest/transport.hpp"

namespace {

using namespace uavharvest;

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> params;
  std::string out_dir;
  std::uint64_t seed = kDefaultSeed;
  long trials = -1;
  int k_sim = -1;
  std::string mode;
  bool verify = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "Config file (JSON)");
  cmd->add_option("--param", args.params,
                  "key=value override, unit suffixes allowed (repeatable)");
  cmd->add_option("--seed", args.seed, "RNG seed");
  cmd->add_option("--trials", args.trials, "Monte Carlo trials");
  cmd->add_option("--out", args.out_dir, "Output directory");
  cmd->add_option("--k-sim", args.k_sim, "Simulated interfering windows/side");
  cmd->add_option("--mode", args.mode, "Grid mode override")
      ->check(CLI::IsMember({"1d", "2d"}));
  cmd->add_flag("--verify", args.verify,
                "Fail when analytic and MC disagree beyond 5 SE");
}

std::string default_out_dir(const CommonArgs& args) {
  if (!args.out_dir.empty()) return args.out_dir;
  if (const char* env = std::getenv("UAVHARVEST_OUT")) return env;
  return "out";
}

void apply_common(ExperimentSpec& spec, const CommonArgs& args) {
  if (!args.config_path.empty()) {
    spec.cfg = load_config_file(args.config_path);
    std::ifstream in(args.config_path);
    std::stringstream buf;
    buf << in.rdbuf();
    spec.modulation = modulation_from_config(buf.str());
  }
  for (const std::string& kv : args.params) {
    apply_param_override(spec.cfg, kv);
  }
  if (!args.mode.empty()) {
    spec.cfg.mode = args.mode == "2d" ? GridMode::TwoD : GridMode::OneD;
    spec.cfg.validate();
  }
  spec.seed = args.seed;
  if (args.trials > 0) spec.trials = args.trials;
  if (args.k_sim > 0) spec.k_sim = args.k_sim;
  spec.out_dir = default_out_dir(args);
  spec.verify = args.verify;
}

int report_run(const RunSummary& summary) {
  for (const std::string& path : summary.csv_paths) {
    std::cout << "wrote " << path << "\n";
  }
  std::cout << "wrote " << summary.manifest_path << "\n";
  std::cout << "done in " << summary.wall_ms / 1000.0 << " s\n";
  if (!summary.verify_ok) {
    for (const std::string& f : summary.verify_failures) {
      std::cerr << "VERIFY FAIL: " << f << "\n";
    }
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"UAV data-harvesting network performance experiments"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);

  // run <experiment>
  CommonArgs run_args;
  std::string experiment_id;
  CLI::App* run_cmd = app.add_subcommand(
      "run", "Run an experiment (laplace|coverage|rate|harvest|optimize|"
             "transport|sinr|2d|figure:<3..11>)");
  run_cmd->add_option("experiment", experiment_id, "Experiment id")
      ->required();
  add_common(run_cmd, run_args);

  // verify-all [config-dir]
  CommonArgs verify_args;
  std::string config_dir = "configs";
  CLI::App* verify_cmd = app.add_subcommand(
      "verify-all", "Run the analytic-vs-MC agreement and invariant suite "
                    "over a directory of configs");
  verify_cmd->add_option("config-dir", config_dir, "Directory of *.json");
  add_common(verify_cmd, verify_args);

  // optimize
  CommonArgs opt_args;
  double tolerance_m = 1.0;
  CLI::App* opt_cmd =
      app.add_subcommand("optimize", "Find the window length maximizing the "
                                     "rate objective on (0, mu]");
  opt_cmd->add_option("--tolerance", tolerance_m, "Refinement tolerance, m");
  add_common(opt_cmd, opt_args);

  // transport
  CommonArgs tr_args;
  CLI::App* tr_cmd = app.add_subcommand(
      "transport", "Check the harvested-data / rate transport identity");
  add_common(tr_cmd, tr_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      ExperimentSpec spec = default_experiment(experiment_id);
      apply_common(spec, run_args);
      return report_run(run_experiment(spec));
    }
    if (verify_cmd->parsed()) {
      const long trials = verify_args.trials > 0 ? verify_args.trials : 20000;
      const VerifyReport report = verify_all(
          config_dir, default_out_dir(verify_args), trials, verify_args.seed);
      for (const VerifyCheck& c : report.checks) {
        std::cout << (c.pass ? "[pass] " : "[FAIL] ") << c.config_name << ": "
                  << c.check << (c.detail.empty() ? "" : "  (" + c.detail + ")")
                  << "\n";
      }
      std::cout << "report: " << report.report_path << "\n";
      return report.all_pass ? 0 : 1;
    }
    if (opt_cmd->parsed()) {
      ExperimentSpec spec = default_experiment("optimize");
      apply_common(spec, opt_args);
      spec.opt_tolerance_m = tolerance_m;
      spec.sweep = {"lambda", {spec.cfg.lambda}};
      const RunSummary summary = run_experiment(spec);
      const OptimizeResult r = optimize_window(spec.cfg, tolerance_m);
      std::cout << "w* = " << r.w_star << " m (" << r.w_star / spec.cfg.mu
                << " mu), objective " << r.objective.value << "\n";
      if (r.sweep.non_unimodal) std::cout << "warning: sweep not unimodal\n";
      if (r.sweep.ambiguous_tie) std::cout << "warning: grid tie, smallest w\n";
      return report_run(summary);
    }
    if (tr_cmd->parsed()) {
      ExperimentSpec spec = default_experiment("transport");
      apply_common(spec, tr_args);
      const TransportReport a =
          check_identity_analytic(spec.cfg, spec.modulation);
      std::cout << "analytic: D=" << a.harvested << " R=" << a.rate
                << " K=" << a.mean_devices << " T=" << a.dwell_time
                << " ratio=" << a.ratio << " occupancy=" << a.occupancy
                << "\n";
      Scenario sc{spec.cfg, spec.seed, spec.k_sim};
      const TransportReport s =
          check_identity_simulated(sc, spec.modulation, spec.trials);
      std::cout << "simulated: ratio=" << s.ratio << " +- "
                << s.ratio_std_error << "\n";
      spec.sweep = {"lambda", {spec.cfg.lambda}};
      spec.sweep2 = {"v", {spec.cfg.v}};
      return report_run(run_experiment(spec));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
