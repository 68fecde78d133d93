#pragma once

#include "uavharvest/laplace.hpp"

namespace uavharvest {

struct MetricOptions {
  QuadratureSpec outer{};   // rule over the typical window
  QuadratureSpec inner{};   // per-window rule inside the interference product
  ProductTruncation truncation{};
};

// P(SIR >= tau) of the typical UAV (SINR when cfg.noise > 0):
//   occ/(w*l) * II_W0 sum_{i<m} (-s)^i/i! d^i/ds^i L_I(s) dy dx,
//   s = tau*m*(x^2+y^2+h^2)^(alpha/2)/(p*Omega).
// Dispatches on cfg.mode; bounded by 1 - exp(-lambda*w*l).
Estimate coverage_probability(const NetworkConfig& cfg,
                              const MetricOptions& opt = {});

// Same integral without the occupancy prefactor:
// P(SIR >= tau | typical window nonempty).
Estimate conditional_coverage(const NetworkConfig& cfg,
                              const MetricOptions& opt = {});

// log2(M) * coverage_probability, bits/sec/Hz.
Estimate mean_rate(const NetworkConfig& cfg, const ModulationRule& mod,
                   const MetricOptions& opt = {});

// Mean data harvested from the typical IoT device per UAV passage, bits/Hz:
//   occ*log2(M)/(lambda*w*l^2*v) * II_W0 (same inner sum) dy dx.
// Shares the coverage integral, so D = R*T/K holds exactly as implemented.
// At lambda = 0 this returns the Slivnyak limit log2(M)*(w/v)*conditional.
Estimate harvested_data(const NetworkConfig& cfg, const ModulationRule& mod,
                        const MetricOptions& opt = {});

// 2-D lattice variants; require cfg.mode == TwoD.
Estimate coverage_probability_2d(const NetworkConfig& cfg,
                                 const MetricOptions& opt = {});
Estimate mean_rate_2d(const NetworkConfig& cfg, const ModulationRule& mod,
                      const MetricOptions& opt = {});

// (1/(w*l)) * II_W0 derivative-sum integrand; the shared inner integral of
// the metrics above, exposed for reuse and tests.
Estimate windowed_ccdf_mean(const NetworkConfig& cfg,
                            const MetricOptions& opt = {});

}  // namespace uavharvest
