#include <doctest.h>

#include <cmath>

#include "uavharvest/transport.hpp"

using namespace uavharvest;

namespace {

NetworkConfig base_config() {
  NetworkConfig cfg;
  cfg.lambda = 1e-3;
  cfg.mu = 2000;
  cfg.l = 500;
  cfg.w = 500;
  cfg.h = 200;
  cfg.v = 30;
  cfg.alpha = 3.5;
  cfg.tau = 1.0;
  return cfg;
}

}  // namespace

TEST_CASE("analytic identity D*K = R*T holds exactly as implemented") {
  const ModulationRule mod = ModulationRule::derived();
  for (double lambda : {5e-4, 1e-3, 2e-3}) {
    for (double v : {15.0, 30.0, 60.0}) {
      NetworkConfig cfg = base_config();
      cfg.lambda = lambda;
      cfg.v = v;
      const TransportReport r = check_identity_analytic(cfg, mod);
      CHECK(r.ratio == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(r.mean_devices == doctest::Approx(lambda * cfg.w * cfg.l));
      CHECK(r.dwell_time == doctest::Approx(cfg.w / v));
    }
  }
}

TEST_CASE("occupancy column reports the high-density approximation quality") {
  NetworkConfig cfg = base_config();
  cfg.lambda = 5e-4;
  cfg.w = 100;
  cfg.l = 100;  // lambda*w*l = 5
  const TransportReport r =
      check_identity_analytic(cfg, ModulationRule::derived());
  CHECK(r.occupancy == doctest::Approx(0.99326205300091453).epsilon(1e-12));
}

TEST_CASE("doubling the speed halves D and leaves the ratio at 1") {
  const ModulationRule mod = ModulationRule::derived();
  NetworkConfig cfg = base_config();
  const TransportReport a = check_identity_analytic(cfg, mod);
  cfg.v *= 2.0;
  const TransportReport b = check_identity_analytic(cfg, mod);
  CHECK(b.harvested == doctest::Approx(a.harvested / 2).epsilon(1e-12));
  CHECK(b.ratio == doctest::Approx(a.ratio).epsilon(1e-12));
}

TEST_CASE("simulated ratio lands within 3 propagated standard errors") {
  Scenario sc{base_config(), 777, 64};
  const TransportReport r =
      check_identity_simulated(sc, ModulationRule::derived(), 4000);
  CHECK(r.ratio_std_error > 0.0);
  CHECK(std::abs(r.ratio - 1.0) <= 3.0 * r.ratio_std_error);
}

TEST_CASE("transport requires devices") {
  NetworkConfig cfg = base_config();
  cfg.lambda = 0.0;
  CHECK_THROWS_AS(check_identity_analytic(cfg, ModulationRule::derived()),
                  ConfigError);
}
