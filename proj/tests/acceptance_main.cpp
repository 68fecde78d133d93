// Acceptance suite: one criterion per section, one [PASS]/[FAIL] line each,
// nonzero exit when any criterion fails. Run with a criterion number
// (1..11) to execute a single one.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "uavharvest/experiments.hpp"
#include "uavharvest/metrics.hpp"
#include "uavharvest/optimize.hpp"
#include "uavharvest/sim.hpp"
#include "uavharvest/transport.hpp"

using namespace uavharvest;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

constexpr std::uint64_t kSeed = 0xACCE97ED;

struct Criterion {
  int id;
  std::string title;
  bool pass = true;
  std::vector<std::string> notes;

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back("failed: " + what);
    }
  }
  void note(const std::string& text) { notes.push_back(text); }
};

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) {
    g.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
  }
  return g;
}

std::string fmt(double x) { return units::format_double(x); }

// 1. Shot-noise transform vs Monte Carlo, three path-loss exponents,
//    curves strictly ordered in alpha.
void criterion_laplace(Criterion& c) {
  const ExperimentSpec preset = figure_preset(3);
  const std::vector<double>& grid = preset.sweep.grid;
  std::vector<std::vector<double>> curves;
  double worst_z = 0.0;
  for (double alpha : preset.sweep2.grid) {
    NetworkConfig cfg = preset.cfg;
    cfg.alpha = alpha;
    cfg.p = std::pow(1000.0, alpha);
    LaplaceEvaluator ev(cfg, {});
    Scenario sc{cfg, stream_key(kSeed, 1), preset.k_sim};
    const auto mc = empirical_laplace(sc, grid, 100000, false);
    std::vector<double> curve;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double a = ev.value(grid[i]).value;
      curve.push_back(a);
      const double z = mc[i].std_error > 0.0
                           ? std::abs(a - mc[i].mean) / mc[i].std_error
                           : 0.0;
      worst_z = std::max(worst_z, z);
      c.expect(std::abs(a - mc[i].mean) <= 3.0 * mc[i].std_error + 1e-12,
               "alpha=" + fmt(alpha) + " s=" + fmt(grid[i]) + " z=" + fmt(z));
    }
    curves.push_back(std::move(curve));
  }
  c.note("worst |z| = " + fmt(worst_z) + " over 60 grid points");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    c.expect(curves[0][i] > curves[1][i] && curves[1][i] > curves[2][i],
             "alpha ordering at s=" + fmt(grid[i]));
  }
}

// 2. Coverage vs Monte Carlo over the window-length grid, occupancy bound,
//    monotone decrease.
void criterion_coverage(Criterion& c) {
  const ExperimentSpec preset = figure_preset(4);
  double prev = 2.0;
  double worst_z = 0.0;
  for (double w : preset.sweep.grid) {
    NetworkConfig cfg = preset.cfg;
    cfg.w = w;
    const Estimate cov = coverage_probability(cfg);
    Scenario sc{cfg, stream_key(kSeed, 2), 64};
    const SimEstimate mc = coverage_estimate(sc, 100000);
    const double z = std::abs(cov.value - mc.mean) / mc.std_error;
    worst_z = std::max(worst_z, z);
    c.expect(z <= 3.0, "w=" + fmt(w) + " z=" + fmt(z));
    c.expect(cov.value <= cfg.occupancy() + 1e-10,
             "occupancy bound at w=" + fmt(w));
    c.expect(cov.value < prev, "decreasing at w=" + fmt(w));
    prev = cov.value;
  }
  c.note("worst |z| = " + fmt(worst_z) + " over 8 w-points");
}

// 3. Every transform variant equals 1 at s = 0 within 1e-12.
void criterion_normalization(Criterion& c) {
  auto probe = [&](const NetworkConfig& cfg, const std::string& name) {
    for (bool exclude : {false, true}) {
      LaplaceEvaluator::Options opt;
      opt.exclude_center = exclude;
      LaplaceEvaluator ev(cfg, opt);
      c.expect(std::abs(ev.value(0.0).value - 1.0) <= 1e-12,
               name + " value(0)");
      c.expect(std::abs(ev.value_with_noise(0.0, cfg.noise).value - 1.0) <=
                   1e-12,
               name + " with noise");
      c.expect(std::abs(ev.derivative_sum(0.0, cfg.m, cfg.noise).value - 1.0) <=
                   1e-12,
               name + " derivative sum");
    }
  };
  probe(figure_preset(3).cfg, "strip");
  probe(figure_preset(10).cfg, "dense+noise");
  NetworkConfig m4 = figure_preset(4).cfg;
  m4.m = 4;
  probe(m4, "m=4");
  probe(default_experiment("2d").cfg, "lattice");
}

// 4. log2(1+tau) * coverage has an interior maximum on a 30-point grid.
void criterion_rate_max(Criterion& c) {
  NetworkConfig cfg = figure_preset(7).cfg;
  const std::vector<double> taus = log_grid(0.1, std::pow(10.0, 2.5), 30);
  std::vector<double> rate;
  for (double tau : taus) {
    cfg.tau = tau;
    rate.push_back(std::log2(1.0 + tau) * coverage_probability(cfg).value);
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < rate.size(); ++i) {
    if (rate[i] > rate[best]) best = i;
  }
  c.note("max at tau=" + fmt(taus[best]) + ", rate=" + fmt(rate[best]));
  c.expect(best != 0 && best != rate.size() - 1, "maximum is interior");
  c.expect(rate.front() < rate[best], "left endpoint strictly below max");
  c.expect(rate.back() < rate[best], "right endpoint strictly below max");
}

// 5. Window optimization against the stated lambda -> w*/mu mapping
//    {10,20,30}/km2 -> {0.2, 0.3, 0.4}. The model's optimum is strictly
//    decreasing in lambda, so the stated pairing cannot hold for the outer
//    densities; the reversed pairing is printed as a diagnostic.
void criterion_optimize(Criterion& c) {
  const ExperimentSpec preset = figure_preset(8);
  const double targets[3] = {0.2, 0.3, 0.4};
  double ratios[3] = {0, 0, 0};
  for (int i = 0; i < 3; ++i) {
    NetworkConfig cfg = preset.cfg;
    cfg.lambda = preset.sweep.grid[static_cast<std::size_t>(i)];
    const OptimizeResult r = optimize_window(cfg, 1.0);
    ratios[i] = r.w_star / cfg.mu;
    c.note("lambda=" + fmt(cfg.lambda * 1e6) + "/km^2: w*/mu=" +
           fmt(ratios[i]) + (r.sweep.non_unimodal ? " (non-unimodal)" : ""));
    c.expect(!r.sweep.non_unimodal,
             "unimodal sweep at lambda=" + fmt(cfg.lambda * 1e6) + "/km^2");
    c.expect(std::abs(ratios[i] - targets[i]) <= 0.05,
             "w*/mu=" + fmt(ratios[i]) + " vs stated " + fmt(targets[i]) +
                 " at lambda=" + fmt(cfg.lambda * 1e6) + "/km^2");
  }
  bool reversed_ok = true;
  for (int i = 0; i < 3; ++i) {
    reversed_ok = reversed_ok && std::abs(ratios[i] - targets[2 - i]) <= 0.05;
  }
  c.note(std::string("diagnostic: reversed pairing {0.4,0.3,0.2} ") +
         (reversed_ok ? "matches within +-0.05" : "does not match"));
}

// 6. Harvested data: analytic vs passage simulation, exact 1/v scaling,
//    monotone in mu.
void criterion_harvest(Criterion& c) {
  const ModulationRule mod = ModulationRule::derived();
  NetworkConfig cfg = figure_preset(9).cfg;
  const Estimate d = harvested_data(cfg, mod);
  Scenario sc{cfg, stream_key(kSeed, 6), 64};
  const SimEstimate mc =
      harvest_passage_estimate(sc, cfg.w / (cfg.v * 100.0), 10000, mod);
  const double z = std::abs(d.value - mc.mean) / mc.std_error;
  c.note("analytic D=" + fmt(d.value) + ", MC " + fmt(mc.mean) + " +- " +
         fmt(mc.std_error) + " (z=" + fmt(z) + ")");
  c.expect(z <= 3.0, "analytic within 3 SE of the passage simulation");

  NetworkConfig fast = cfg;
  fast.v *= 2.0;
  const double dv = harvested_data(fast, mod).value;
  c.expect(std::abs(dv - d.value / 2.0) <= 1e-12 * d.value,
           "D(2v) = D(v)/2 to 1e-12");

  double prev = 0.0;
  for (double mu : {1000.0, 2000.0, 4000.0}) {
    NetworkConfig at_mu = cfg;
    at_mu.mu = mu;
    const double dm = harvested_data(at_mu, mod).value;
    c.expect(dm >= prev, "nondecreasing at mu=" + fmt(mu));
    prev = dm;
  }
}

// 7. Mass-transport identity on a 3x3 (lambda, v) grid: exact analytic
//    ratio, simulated ratio within 3 propagated SE.
void criterion_transport(Criterion& c) {
  const ModulationRule mod = ModulationRule::derived();
  int cell = 0;
  for (double lambda : {0.5e-3, 1e-3, 2e-3}) {
    for (double v : {15.0, 30.0, 60.0}) {
      NetworkConfig cfg = figure_preset(9).cfg;
      cfg.lambda = lambda;
      cfg.v = v;
      const TransportReport a = check_identity_analytic(cfg, mod);
      c.expect(std::abs(a.ratio - 1.0) <= a.budget.total() + 1e-9,
               "analytic ratio at lambda=" + fmt(lambda) + " v=" + fmt(v) +
                   ": " + fmt(a.ratio));
      Scenario sc{cfg, stream_key(kSeed, 70 + cell++), 64};
      const TransportReport s = check_identity_simulated(sc, mod, 10000);
      c.expect(std::abs(s.ratio - 1.0) <= 3.0 * s.ratio_std_error,
               "simulated ratio at lambda=" + fmt(lambda) + " v=" + fmt(v) +
                   ": " + fmt(s.ratio) + " +- " + fmt(s.ratio_std_error));
    }
  }
}

// 8. Thermal noise is negligible against interference: SIR and SINR curves
//    within 2 SE, interference transform below the noise transform.
void criterion_sinr(Criterion& c) {
  const ExperimentSpec preset = figure_preset(10);
  Scenario sc{preset.cfg, stream_key(kSeed, 8), preset.k_sim};
  const CoverageCurves curves =
      coverage_curves(sc, preset.sweep.grid, 100000);
  for (std::size_t i = 0; i < preset.sweep.grid.size(); ++i) {
    const double gap = std::abs(curves.sir[i].mean - curves.sinr[i].mean);
    const double se =
        std::max(curves.sir[i].std_error, curves.sinr[i].std_error);
    c.expect(gap < 2.0 * se + 1e-12,
             "SIR/SINR gap " + fmt(gap) + " at tau=" +
                 fmt(preset.sweep.grid[i]));
  }
  LaplaceEvaluator::Options iop;
  iop.exclude_center = true;
  LaplaceEvaluator interf(preset.cfg, iop);
  for (double s : figure_preset(11).sweep.grid) {
    const double li = interf.value(s).value;
    const double ln = std::exp(-s * preset.cfg.noise);
    c.expect(li < ln, "L_I(" + fmt(s) + ")=" + fmt(li) + " below noise " +
                          fmt(ln));
  }
}

// 9. Stationary-snapshot shot noise at t=0 vs t=mu/(2v): two-sample KS does
//    not reject at 5%.
void criterion_time_invariance(Criterion& c) {
  NetworkConfig cfg = figure_preset(3).cfg;  // alpha = 3 base
  Scenario sc{cfg, stream_key(kSeed, 9), 64};
  const int n = 10000;
  const double t1 = cfg.mu / (2.0 * cfg.v);
  std::vector<double> a, b;
  a.reserve(n);
  b.reserve(n);
  for (int i = 0; i < n; ++i) {
    a.push_back(sample_snapshot_stationary(sc, 0.0, i).shot_noise);
    b.push_back(sample_snapshot_stationary(sc, t1, n + i).shot_noise);
  }
  const double d = ks_statistic(a, b);
  const double crit = ks_critical(n, n, 0.05);
  c.note("KS distance " + fmt(d) + " vs critical " + fmt(crit));
  c.expect(d < crit, "KS test must not reject at 5%");
}

// 10. 2-D lattice: distant rows reduce to the 1-D strip; analytic matches
//     the 2-D Monte Carlo.
void criterion_twod(Criterion& c) {
  NetworkConfig cfg = default_experiment("2d").cfg;
  cfg.m = 2;

  NetworkConfig far_rows = cfg;
  far_rows.nu = 100.0 * cfg.mu;
  const double cov2_far = coverage_probability_2d(far_rows).value;
  NetworkConfig one = cfg;
  one.mode = GridMode::OneD;
  const double cov1 = coverage_probability(one).value;
  c.note("1-D " + fmt(cov1) + " vs 2-D(nu=100mu) " + fmt(cov2_far));
  c.expect(std::abs(cov2_far - cov1) <= 1e-4,
           "nu = 100 mu reduces to the strip within 1e-4");

  const Estimate cov2 = coverage_probability_2d(cfg);
  Scenario sc{cfg, stream_key(kSeed, 10), 16};
  const SimEstimate mc = coverage_estimate(sc, 100000);
  const double z = std::abs(cov2.value - mc.mean) / mc.std_error;
  c.note("2-D analytic " + fmt(cov2.value) + " vs MC " + fmt(mc.mean) +
         " +- " + fmt(mc.std_error) + " (z=" + fmt(z) + ")");
  c.expect(z <= 3.0, "2-D analytic within 3 SE of 2-D Monte Carlo");
}

// 11. verify-all is reproducible: identical seeds give byte-identical CSVs.
void criterion_determinism(Criterion& c) {
  const fs::path base = fs::temp_directory_path() / "uavharvest_acceptance";
  fs::remove_all(base);
  const fs::path cfg_dir = base / "configs";
  fs::create_directories(cfg_dir);
  {
    std::ofstream f(cfg_dir / "strip.json");
    f << R"({"lambda": "200/km^2", "mu": "1 km", "w": "0.4 km",
             "l": "0.5 km", "h": "0.2 km", "v": 10, "alpha": 4,
             "tau": "0 dB"})";
    std::ofstream g(cfg_dir / "noise.json");
    g << R"({"lambda": "100000/km^2", "mu": "200 m", "w": "100 m",
             "l": "100 m", "h": "100 m", "v": 10, "alpha": 2,
             "p": "23 dBm", "noise": "-104 dBm", "tau": "0 dB"})";
  }
  const VerifyReport r1 =
      verify_all(cfg_dir.string(), (base / "out1").string(), 100, 7);
  const VerifyReport r2 =
      verify_all(cfg_dir.string(), (base / "out2").string(), 100, 7);
  c.expect(r1.all_pass, "verify-all passes on the canonical configs");
  c.expect(r1.csv_paths.size() == r2.csv_paths.size(), "same outputs");
  for (std::size_t i = 0; i < r1.csv_paths.size(); ++i) {
    std::ifstream f1(r1.csv_paths[i], std::ios::binary);
    std::ifstream f2(r2.csv_paths[i], std::ios::binary);
    std::stringstream b1, b2;
    b1 << f1.rdbuf();
    b2 << f2.rdbuf();
    c.expect(b1.str() == b2.str() && !b1.str().empty(),
             "byte-identical " + r1.csv_paths[i]);
  }
}

}  // namespace

int main(int argc, char** argv) {
  struct Entry {
    int id;
    const char* title;
    void (*fn)(Criterion&);
  };
  const Entry entries[] = {
      {1, "shot-noise transform vs MC, ordered in alpha", criterion_laplace},
      {2, "coverage vs MC, occupancy bound, decreasing in w",
       criterion_coverage},
      {3, "transform normalization at s = 0", criterion_normalization},
      {4, "interior rate maximum in tau", criterion_rate_max},
      {5, "optimal window vs stated density mapping", criterion_optimize},
      {6, "harvested data vs passage simulation", criterion_harvest},
      {7, "mass-transport identity", criterion_transport},
      {8, "SINR vs SIR under thermal noise", criterion_sinr},
      {9, "shot-noise time invariance (KS)", criterion_time_invariance},
      {10, "2-D lattice consistency", criterion_twod},
      {11, "verify-all byte determinism", criterion_determinism},
  };

  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);

  int failures = 0;
  for (const Entry& e : entries) {
    if (only != 0 && e.id != only) continue;
    Criterion c{e.id, e.title};
    const auto t0 = Clock::now();
    try {
      e.fn(c);
    } catch (const std::exception& ex) {
      c.pass = false;
      c.notes.push_back(std::string("exception: ") + ex.what());
    }
    const double secs =
        std::chrono::duration<double>(Clock::now() - t0).count();
    std::printf("[%s] criterion %2d: %s (%.1f s)\n", c.pass ? "PASS" : "FAIL",
                e.id, e.title, secs);
    for (const std::string& n : c.notes) {
      std::printf("         %s\n", n.c_str());
    }
    if (!c.pass) ++failures;
  }
  if (failures > 0) {
    std::printf("%d criteria failed\n", failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
