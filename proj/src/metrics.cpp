#include "uavharvest/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace uavharvest {
namespace {

// Integral of the derivative-sum integrand over one quadrant of the typical
// window at the given rule order. Returns the window mean (integral / (w*l))
// and accumulates the inner (product) budgets, T-weighted.
double quadrant_mean(const NetworkConfig& cfg, const LaplaceEvaluator& eval,
                     int order, ErrorBudget* inner_budget) {
  const RectRule rule = RectRule::make(0.0, cfg.w / 2, 0.0, cfg.l / 2, order,
                                       order);
  const double s_scale =
      cfg.tau * static_cast<double>(cfg.m) / (cfg.p * cfg.omega);
  double integral = 0.0;
  double werr_quad = 0.0, werr_trunc = 0.0;
  for (std::size_t k = 0; k < rule.size(); ++k) {
    const double d2 =
        rule.x[k] * rule.x[k] + rule.y[k] * rule.y[k] + cfg.h * cfg.h;
    const double s = s_scale * std::pow(d2, cfg.alpha / 2.0);
    const Estimate term = eval.derivative_sum(s, cfg.m, cfg.noise);
    const double t = std::max(term.value, 0.0);
    integral += rule.weight[k] * t;
    if (inner_budget != nullptr) {
      werr_quad += rule.weight[k] * t * term.budget.quadrature;
      werr_trunc += rule.weight[k] * t * term.budget.truncation;
    }
  }
  if (inner_budget != nullptr && integral > 0.0) {
    inner_budget->quadrature += werr_quad / integral;
    inner_budget->truncation += werr_trunc / integral;
  }
  // Quadrant weights sum to w*l/4; four quadrants by symmetry of the
  // integrand in (x, y).
  return 4.0 * integral / (cfg.w * cfg.l);
}

}  // namespace

Estimate windowed_ccdf_mean(const NetworkConfig& cfg,
                            const MetricOptions& opt) {
  cfg.validate();
  LaplaceEvaluator::Options lop;
  lop.exclude_center = true;
  lop.truncation = opt.truncation;
  lop.quadrature = opt.inner;
  const LaplaceEvaluator eval(cfg, lop);

  Estimate out;
  ErrorBudget inner;
  const double mean = quadrant_mean(cfg, eval, opt.outer.nodes, &inner);
  const double mean_half =
      quadrant_mean(cfg, eval, std::max(2, opt.outer.nodes / 2), nullptr);
  out.value = mean;
  out.budget = inner;
  if (mean > 0.0) {
    out.budget.quadrature += std::abs(mean - mean_half) / mean;
  }
  return out;
}

Estimate conditional_coverage(const NetworkConfig& cfg,
                              const MetricOptions& opt) {
  return windowed_ccdf_mean(cfg, opt);
}

Estimate coverage_probability(const NetworkConfig& cfg,
                              const MetricOptions& opt) {
  Estimate e = windowed_ccdf_mean(cfg, opt);
  e.value *= cfg.occupancy();
  return e;
}

Estimate mean_rate(const NetworkConfig& cfg, const ModulationRule& mod,
                   const MetricOptions& opt) {
  Estimate e = coverage_probability(cfg, opt);
  e.value *= mod.bits_per_symbol(cfg.tau);
  return e;
}

Estimate harvested_data(const NetworkConfig& cfg, const ModulationRule& mod,
                        const MetricOptions& opt) {
  if (cfg.mode == GridMode::TwoD) {
    throw ConfigError("harvested_data: defined for the 1-D strip model");
  }
  const double bits = mod.bits_per_symbol(cfg.tau);
  if (bits == 0.0) return {};
  Estimate e = windowed_ccdf_mean(cfg, opt);
  if (cfg.lambda == 0.0) {
    // Slivnyak limit: the typical device is always the one selected.
    e.value *= bits * cfg.w / cfg.v;
    return e;
  }
  e.value *= cfg.occupancy() * bits / (cfg.lambda * cfg.l * cfg.v);
  return e;
}

Estimate coverage_probability_2d(const NetworkConfig& cfg,
                                 const MetricOptions& opt) {
  if (cfg.mode != GridMode::TwoD) {
    throw ConfigError("coverage_probability_2d: cfg.mode must be 2d");
  }
  return coverage_probability(cfg, opt);
}

Estimate mean_rate_2d(const NetworkConfig& cfg, const ModulationRule& mod,
                      const MetricOptions& opt) {
  if (cfg.mode != GridMode::TwoD) {
    throw ConfigError("mean_rate_2d: cfg.mode must be 2d");
  }
  return mean_rate(cfg, mod, opt);
}

}  // namespace uavharvest
