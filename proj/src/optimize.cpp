#include "uavharvest/optimize.hpp"

#include <algorithm>
#include <cmath>

namespace uavharvest {

Estimate window_objective(const NetworkConfig& cfg, double w,
                          const MetricOptions& opt) {
  if (!(w > 0.0) || w > cfg.mu) {
    throw ConfigError("objective: w must satisfy 0 < w <= mu");
  }
  NetworkConfig scan = cfg;
  scan.w = w;
  return coverage_probability(scan, opt);
}

OptimizeResult optimize_window(const NetworkConfig& cfg, double tolerance_m,
                               int grid_points, const MetricOptions& opt) {
  if (!(tolerance_m > 0.0)) {
    throw ConfigError("optimize_window: tolerance must be > 0");
  }
  if (grid_points < 3) {
    throw ConfigError("optimize_window: need at least 3 grid points");
  }

  OptimizeResult out;
  SweepResult& sweep = out.sweep;
  sweep.points.reserve(static_cast<std::size_t>(grid_points));
  for (int k = 1; k <= grid_points; ++k) {
    const double w = cfg.mu * static_cast<double>(k) / grid_points;
    const Estimate e = window_objective(cfg, w, opt);
    sweep.points.push_back({w, e.value, e.budget});
  }

  int best = 0;
  for (int k = 1; k < grid_points; ++k) {
    if (sweep.points[k].value > sweep.points[best].value) best = k;
  }
  const double peak = sweep.points[best].value;
  if (peak <= 0.0) {
    sweep.zero_objective = true;
    sweep.argmax_index = 0;
    out.w_star = sweep.points[0].param;
    out.objective = {sweep.points[0].value, sweep.points[0].budget};
    return out;
  }

  // Resolution of the grid comparison: absolute error implied by the budgets.
  auto resolution = [&](int k) {
    return sweep.points[k].value * sweep.points[k].budget.total() +
           peak * 1e-12;
  };

  // Ties within the budget resolve to the smallest w.
  for (int k = 0; k < grid_points; ++k) {
    if (k != best &&
        sweep.points[k].value >= peak - resolution(k) - resolution(best)) {
      sweep.ambiguous_tie = true;
      if (k < best) best = k;
    }
  }

  // Unimodality check: a strict local maximum separated from the global one
  // by more than the combined budget.
  for (int k = 1; k + 1 < grid_points; ++k) {
    if (k == best) continue;
    const double v = sweep.points[k].value;
    if (v > sweep.points[k - 1].value + resolution(k - 1) &&
        v > sweep.points[k + 1].value + resolution(k + 1) &&
        v < peak - resolution(k) - resolution(best)) {
      sweep.non_unimodal = true;
    }
  }
  sweep.argmax_index = best;

  // Golden-section refinement inside the bracketing grid interval.
  double lo = best > 0 ? sweep.points[best - 1].param
                       : sweep.points[best].param * 0.5;
  double hi = best + 1 < grid_points ? sweep.points[best + 1].param : cfg.mu;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - (hi - lo) * inv_phi;
  double d = lo + (hi - lo) * inv_phi;
  Estimate fc = window_objective(cfg, c, opt);
  Estimate fd = window_objective(cfg, d, opt);
  while (hi - lo > tolerance_m) {
    if (fc.value > fd.value) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - (hi - lo) * inv_phi;
      fc = window_objective(cfg, c, opt);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + (hi - lo) * inv_phi;
      fd = window_objective(cfg, d, opt);
    }
  }
  out.w_star = 0.5 * (lo + hi);
  out.objective = window_objective(cfg, out.w_star, opt);
  if (out.objective.value < sweep.points[best].value) {
    // The grid point stays the argmax record when refinement lands lower.
    out.w_star = sweep.points[best].param;
    out.objective = {sweep.points[best].value, sweep.points[best].budget};
  }
  return out;
}

}  // namespace uavharvest
