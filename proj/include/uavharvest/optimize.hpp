#pragma once

#include <vector>

#include "uavharvest/metrics.hpp"

namespace uavharvest {

struct SweepPoint {
  double param = 0.0;
  double value = 0.0;
  ErrorBudget budget;
};

struct SweepResult {
  std::vector<SweepPoint> points;  // ascending in param
  int argmax_index = -1;
  bool ambiguous_tie = false;   // several grid maxima within the error budget
  bool non_unimodal = false;    // separated local maxima beyond the budget
  bool zero_objective = false;  // objective vanished on the whole grid
};

// Rate objective with the modulation constant dropped: the coverage-type
// integral evaluated with the window length replaced by w.
Estimate window_objective(const NetworkConfig& cfg, double w,
                          const MetricOptions& opt = {});

struct OptimizeResult {
  double w_star = 0.0;
  Estimate objective;
  SweepResult sweep;
};

// Coarse grid scan over (0, mu] followed by golden-section refinement of the
// bracketed maximum down to tolerance_m. Non-unimodal sweeps return the
// global grid argmax with a warning flag instead of failing.
OptimizeResult optimize_window(const NetworkConfig& cfg, double tolerance_m,
                               int grid_points = 32,
                               const MetricOptions& opt = {});

}  // namespace uavharvest
