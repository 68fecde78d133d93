#pragma once

#include <stdexcept>
#include <string>

namespace uavharvest {

// Raised for malformed config documents, unknown units, and invariant
// violations; the message names the offending field and bound.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parsers for unit-suffixed config values. Every function returns strict SI
// (meters, seconds, watts, linear ratios); a bare number is interpreted as
// already being in SI units.
namespace units {

double length_m(const std::string& text, const std::string& field);
double speed_mps(const std::string& text, const std::string& field);
double area_density_per_m2(const std::string& text, const std::string& field);
double power_w(const std::string& text, const std::string& field);
double ratio_linear(const std::string& text, const std::string& field);
double frequency_hz(const std::string& text, const std::string& field);

// Noise accepts absolute power ("W", "dBm", "dBW") or a spectral density
// ("dBm/Hz"), in which case bandwidth_hz must be positive.
double noise_power_w(const std::string& text, double bandwidth_hz,
                     const std::string& field);

// Shortest decimal round-trip formatting, used everywhere a double is
// serialized so that emit -> load is bit-exact.
std::string format_double(double value);

}  // namespace units
}  // namespace uavharvest
