#include <doctest.h>

#include <cmath>

#include "uavharvest/optimize.hpp"

using namespace uavharvest;

namespace {

NetworkConfig fig8_config(double lambda_per_km2) {
  NetworkConfig cfg;
  cfg.lambda = lambda_per_km2 * 1e-6;
  cfg.mu = 2000;
  cfg.l = 500;
  cfg.h = 200;
  cfg.v = 10;
  cfg.alpha = 4;
  cfg.tau = 15.0;
  cfg.w = 500;
  return cfg;
}

}  // namespace

TEST_CASE("objective is the rate integrand with the modulation factor dropped") {
  NetworkConfig cfg = fig8_config(20);
  cfg.tau = 3.0;  // 2 bits with the derived rule
  const ModulationRule mod = ModulationRule::derived();
  for (double w : {200.0, 800.0, 1600.0}) {
    NetworkConfig at_w = cfg;
    at_w.w = w;
    const double obj = window_objective(cfg, w).value;
    const double rate = mean_rate(at_w, mod).value;
    CHECK(obj == doctest::Approx(rate / 2.0).epsilon(1e-10));
  }
}

TEST_CASE("objective vanishes as w -> 0 and rejects w outside (0, mu]") {
  const NetworkConfig cfg = fig8_config(20);
  // Pinched by its own occupancy bound lambda*l*w.
  CHECK(window_objective(cfg, 1e-3).value <= cfg.lambda * cfg.l * 1e-3 * 1.01);
  CHECK(window_objective(cfg, 1e-3).value < 1e-4);
  CHECK_THROWS_AS(window_objective(cfg, 0.0), ConfigError);
  CHECK_THROWS_AS(window_objective(cfg, cfg.mu * 1.01), ConfigError);
}

TEST_CASE("optimizer returns the sweep maximum and a bracketed refinement") {
  const NetworkConfig cfg = fig8_config(20);
  const OptimizeResult r = optimize_window(cfg, 1.0);
  CHECK(r.sweep.points.size() == 32);
  for (const SweepPoint& pt : r.sweep.points) {
    CHECK(r.objective.value >= pt.value - 1e-12);
  }
  CHECK_FALSE(r.sweep.zero_objective);
  CHECK_FALSE(r.sweep.non_unimodal);
  CHECK(r.w_star > 0.0);
  CHECK(r.w_star <= cfg.mu);
}

TEST_CASE("halving the tolerance moves w* by less than the old tolerance") {
  const NetworkConfig cfg = fig8_config(10);
  const double coarse = optimize_window(cfg, 16.0).w_star;
  const double fine = optimize_window(cfg, 8.0).w_star;
  CHECK(std::abs(coarse - fine) < 16.0);
}

TEST_CASE("objective is invariant under power scaling without noise") {
  const NetworkConfig cfg = fig8_config(30);
  NetworkConfig scaled = cfg;
  scaled.p *= 50.0;
  const OptimizeResult a = optimize_window(cfg, 4.0, 16);
  const OptimizeResult b = optimize_window(scaled, 4.0, 16);
  CHECK(a.w_star == doctest::Approx(b.w_star).epsilon(1e-12));
  CHECK(a.objective.value == doctest::Approx(b.objective.value).epsilon(1e-12));
}

TEST_CASE("higher device density pushes the optimal window smaller") {
  const double w10 = optimize_window(fig8_config(10), 2.0, 24).w_star;
  const double w20 = optimize_window(fig8_config(20), 2.0, 24).w_star;
  const double w30 = optimize_window(fig8_config(30), 2.0, 24).w_star;
  CHECK(w10 > w20);
  CHECK(w20 > w30);
}

TEST_CASE("degenerate lambda = 0 returns the zero-objective flag") {
  NetworkConfig cfg = fig8_config(10);
  cfg.lambda = 0.0;
  const OptimizeResult r = optimize_window(cfg, 1.0, 8);
  CHECK(r.sweep.zero_objective);
  CHECK(r.w_star == r.sweep.points.front().param);
  CHECK(r.objective.value == 0.0);
}

TEST_CASE("optimizer argument validation") {
  const NetworkConfig cfg = fig8_config(10);
  CHECK_THROWS_AS(optimize_window(cfg, 0.0), ConfigError);
  CHECK_THROWS_AS(optimize_window(cfg, 1.0, 2), ConfigError);
}
