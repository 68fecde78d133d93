#pragma once

#include "uavharvest/metrics.hpp"
#include "uavharvest/sim.hpp"

namespace uavharvest {

// Mass-transport identity between the UAV-side rate and the IoT-side
// harvested data: D = R * T / K with K = lambda*w*l devices per window and
// T = w/v seconds in a window. Exact for the implemented integrals; the
// occupancy column records how close the high-density approximation is.
struct TransportReport {
  double harvested = 0.0;    // D, bits/Hz per passage
  double rate = 0.0;         // R, bits/sec/Hz
  double mean_devices = 0.0;  // K
  double dwell_time = 0.0;    // T, seconds
  double ratio = 0.0;         // D*K / (R*T)
  double occupancy = 0.0;     // 1 - exp(-lambda*w*l)
  ErrorBudget budget;         // analytic path
  double ratio_std_error = 0.0;  // simulated path (propagated)
};

TransportReport check_identity_analytic(const NetworkConfig& cfg,
                                        const ModulationRule& mod,
                                        const MetricOptions& opt = {});

// R from coverage slots, D from passage simulation, independent seeds; the
// ratio carries the delta-method standard error.
TransportReport check_identity_simulated(const Scenario& sc,
                                         const ModulationRule& mod,
                                         long trials,
                                         double slot_duration_s = 0.0);

}  // namespace uavharvest
