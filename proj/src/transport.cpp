#include "uavharvest/transport.hpp"

#include <cmath>

namespace uavharvest {

TransportReport check_identity_analytic(const NetworkConfig& cfg,
                                        const ModulationRule& mod,
                                        const MetricOptions& opt) {
  if (!(cfg.lambda > 0.0)) {
    throw ConfigError("transport: requires lambda > 0 (K = lambda*w*l > 0)");
  }
  TransportReport r;
  r.mean_devices = cfg.lambda * cfg.w * cfg.l;
  r.dwell_time = cfg.w / cfg.v;
  r.occupancy = cfg.occupancy();

  const Estimate d = harvested_data(cfg, mod, opt);
  const Estimate rate = mean_rate(cfg, mod, opt);
  r.harvested = d.value;
  r.rate = rate.value;
  r.budget = d.budget;
  r.budget += rate.budget;
  r.ratio = rate.value > 0.0
                ? d.value * r.mean_devices / (rate.value * r.dwell_time)
                : 0.0;
  return r;
}

TransportReport check_identity_simulated(const Scenario& sc,
                                         const ModulationRule& mod,
                                         long trials,
                                         double slot_duration_s) {
  const NetworkConfig& cfg = sc.cfg;
  if (!(cfg.lambda > 0.0)) {
    throw ConfigError("transport: requires lambda > 0");
  }
  TransportReport r;
  r.mean_devices = cfg.lambda * cfg.w * cfg.l;
  r.dwell_time = cfg.w / cfg.v;
  r.occupancy = cfg.occupancy();

  if (slot_duration_s <= 0.0) {
    slot_duration_s = cfg.w / (cfg.v * 100.0);
  }
  const double bits = mod.bits_per_symbol(cfg.tau);

  Scenario rate_sc = sc;
  const SimEstimate cov = coverage_estimate(rate_sc, trials);

  Scenario harvest_sc = sc;
  harvest_sc.seed = mix64(sc.seed ^ UINT64_C(0x7261746530313233));
  const SimEstimate harv =
      harvest_passage_estimate(harvest_sc, slot_duration_s, trials, mod);

  r.rate = bits * cov.mean;
  r.harvested = harv.mean;
  if (r.rate > 0.0 && r.harvested > 0.0) {
    r.ratio = r.harvested * r.mean_devices / (r.rate * r.dwell_time);
    const double rel_d = harv.std_error / harv.mean;
    const double rel_r = cov.std_error / cov.mean;
    r.ratio_std_error = r.ratio * std::sqrt(rel_d * rel_d + rel_r * rel_r);
  }
  return r;
}

}  // namespace uavharvest
