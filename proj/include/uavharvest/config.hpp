#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "uavharvest/units.hpp"

namespace uavharvest {

enum class GridMode { OneD, TwoD };

// Full parameter set of the network model, always in SI units (meters,
// seconds, watts, linear ratios). Immutable by convention after validate();
// all evaluators take it by value or const reference.
struct NetworkConfig {
  double lambda = 0.0;  // IoT density, devices per m^2
  double mu = 0.0;      // inter-UAV distance along a trajectory, m
  double nu = 0.0;      // inter-trajectory spacing (2-D mode), m
  double h = 0.0;       // UAV altitude, m
  double w = 0.0;       // activation-window length along x, m
  double l = 0.0;       // activation-window width along y, m
  double v = 0.0;       // UAV speed, m/s
  double alpha = 0.0;   // path-loss exponent
  int m = 1;            // Nakagami shape (positive integer)
  double omega = 1.0;   // Nakagami spread (mean fading gain)
  double p = 1.0;       // transmit power, W
  double tau = 1.0;     // SIR/SINR threshold, linear
  double noise = 0.0;   // thermal noise power, W (0 = pure SIR)
  GridMode mode = GridMode::OneD;

  // Throws ConfigError naming the field and the violated bound.
  void validate() const;

  double window_area() const { return w * l; }
  // P(window nonempty) = 1 - exp(-lambda*w*l), computed without cancellation.
  double occupancy() const { return -std::expm1(-lambda * w * l); }
};

// An activation window's rectangle on the ground plane.
struct WindowGeom {
  double x_center = 0.0;
  double y_center = 0.0;
  double half_w = 0.0;
  double half_l = 0.0;
  long ix = 0;
  long iy = 0;

  double x_min() const { return x_center - half_w; }
  double x_max() const { return x_center + half_w; }
  double y_min() const { return y_center - half_l; }
  double y_max() const { return y_center + half_l; }
  bool contains(double x, double y) const {
    return x >= x_min() && x <= x_max() && y >= y_min() && y <= y_max();
  }
  bool overlaps(const WindowGeom& other) const;
};

// Window of UAV i at time t in Palm coordinates (typical UAV at the origin at
// t = 0; the stationary uniform shift lives in the simulator only).
WindowGeom window_center(const NetworkConfig& cfg, long i, double t_seconds);
WindowGeom window_center(const NetworkConfig& cfg, long i, long j,
                         double t_seconds);

// Nakagami-m power fading: G ~ Gamma(m, omega/m), mean omega.
// m = omega = 1 reduces to the unit-mean exponential (Rayleigh power).
struct FadingModel {
  int m = 1;
  double omega = 1.0;

  // P(G >= x): Erlang tail sum exp(-y) * sum_{i<m} y^i/i!, y = m*x/omega.
  double ccdf(double x) const;
  double mean() const { return omega; }
};

// Modulation order: a fixed M >= 2 or the threshold-derived rule
// M = 2^floor(log2(1+tau)).
class ModulationRule {
 public:
  static ModulationRule fixed(int order);
  static ModulationRule derived();

  int order_for(double tau) const;
  // log2(M); 0 when the derived rule yields M = 1 (tau < 1).
  double bits_per_symbol(double tau) const;
  bool is_derived() const { return derived_; }
  std::string describe() const;

 private:
  bool derived_ = true;
  int fixed_order_ = 2;
};

// Config documents are flat JSON objects whose values are numbers (SI) or
// unit-suffixed strings ("2 km", "1000/km^2", "0 dB", "23 dBm",
// "-174 dBm/Hz" + "bandwidth"). Unknown keys are rejected.
NetworkConfig load_config(const std::string& json_text);
NetworkConfig load_config_file(const std::string& path);

// "key=value" override with the same unit rules as the config document.
void apply_param_override(NetworkConfig& cfg, const std::string& key_value);

// Optional "modulation" key of a config document: "derived" (default) or an
// integer order.
ModulationRule modulation_from_config(const std::string& json_text);

// SI-valued JSON document; load(emit(cfg)) reproduces cfg bit-exactly.
std::string emit_config(const NetworkConfig& cfg);

}  // namespace uavharvest
