#pragma once

#include <span>
#include <string>
#include <vector>

#include "uavharvest/config.hpp"
#include "uavharvest/rng.hpp"

namespace uavharvest {

// Monte Carlo ground truth for the analytic formulas. All estimators are
// bit-reproducible given (seed, trials, cfg): every (trial, window) pair owns
// an independent counter-based stream, so changing k_sim or excluding the
// center window leaves all other draws untouched (paired comparisons).
struct Scenario {
  NetworkConfig cfg;
  std::uint64_t seed = 0x5EEDC0DE;
  // Interfering windows simulated per side (1-D) or per axis (2-D).
  int k_sim = 64;

  // Fraction of the mean interference the simulated horizon misses
  // (centre-point estimate); the basis of the truncation-bias note.
  double horizon_tail_fraction() const;
};

struct SimEstimate {
  std::string metric;
  double mean = 0.0;
  double std_error = 0.0;
  long trials = 0;
  std::uint64_t seed = 0;
  std::string note;

  double ci95_halfwidth() const { return 1.959963984540054 * std_error; }
};

// One TDMA slot seen from the typical UAV at the origin: per nonempty window
// the selected device's position, fading gain, and received power.
struct SlotSample {
  struct Transmitter {
    long i = 0;
    long j = 0;
    double x = 0.0;
    double y = 0.0;
    double gain = 0.0;
    double power = 0.0;
  };
  std::vector<Transmitter> transmitters;
  bool center_occupied = false;
  double signal = 0.0;        // center-window received power
  double interference = 0.0;  // off-center sum
  double shot_noise = 0.0;    // signal + interference
};

// Palm geometry: windows at i*mu (and j*nu), typical UAV at the origin.
SlotSample sample_slot(const Scenario& sc, std::uint64_t trial);

// Stationary snapshot: windows shifted by the uniform vector (U[, V]) and by
// v*t; the observation point stays at (0, 0, h). With the shift forced to 0
// and t = 0 this reproduces sample_slot draw-for-draw.
SlotSample sample_snapshot_stationary(const Scenario& sc, double t_seconds,
                                      std::uint64_t trial);
SlotSample sample_snapshot_at_shift(const Scenario& sc, double t_seconds,
                                    std::uint64_t trial, double shift_u,
                                    double shift_v);

// Mean of exp(-s*N) per grid point; N is the shot noise (exclude_center =
// false) or the interference (true). Paired across the two modes.
std::vector<SimEstimate> empirical_laplace(const Scenario& sc,
                                           std::span<const double> s_grid,
                                           long trials, bool exclude_center);

// Fraction of slots with a nonempty typical window whose SIR (SINR when
// cfg.noise > 0) meets cfg.tau; empty windows count as not covered.
SimEstimate coverage_estimate(const Scenario& sc, long trials);

// Coverage over a threshold grid from one set of slot samples (same draws for
// every tau, and for the SIR/SINR pair).
struct CoverageCurves {
  std::vector<SimEstimate> sir;
  std::vector<SimEstimate> sinr;
};
CoverageCurves coverage_curves(const Scenario& sc,
                               std::span<const double> tau_grid, long trials);

// Per-passage harvested data of the typical device (bits/Hz): time-stepped
// TDMA selection against a Poisson co-window population, fading and counts
// redrawn every slot, interference windows in the moving frame.
SimEstimate harvest_passage_estimate(const Scenario& sc,
                                     double slot_duration_s, long trials,
                                     const ModulationRule& mod);

// P(typical window nonempty) estimate; oracle for 1 - exp(-lambda*w*l).
SimEstimate occupancy_estimate(const Scenario& sc, long trials);

// Selection tallies for the TDMA fairness property: row k holds (times the
// typical device was selected, slots) among slots with exactly k co-window
// devices including the typical one.
struct SelectionTally {
  long devices = 0;
  long selected = 0;
  long slots = 0;
};
std::vector<SelectionTally> selection_counts(const Scenario& sc, long slots,
                                             long max_devices);

// Two-sample Kolmogorov-Smirnov distance and the large-sample critical value
// at the given significance level.
double ks_statistic(std::vector<double> a, std::vector<double> b);
double ks_critical(std::size_t n, std::size_t m, double alpha = 0.05);

// (x)^(-alpha) from x^2, using sqrt chains when 2*alpha is an integer.
struct PathLoss {
  double alpha = 2.0;
  bool dyadic = false;
  int n2 = 4;  // round(2*alpha)

  explicit PathLoss(double a);
  double from_d2(double d2) const;
};

}  // namespace uavharvest
