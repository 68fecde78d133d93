#include "uavharvest/units.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace uavharvest::units {
namespace {

struct ValueSuffix {
  double value;
  std::string suffix;  // lowercased, whitespace stripped
};

ValueSuffix split(const std::string& text, const std::string& field) {
  const char* begin = text.c_str();
  char* end = nullptr;
  double value = std::strtod(begin, &end);
  if (end == begin) {
    throw ConfigError(field + ": cannot parse number from '" + text + "'");
  }
  std::string suffix(end);
  std::string clean;
  for (char c : suffix) {
    if (!std::isspace(static_cast<unsigned char>(c))) {
      clean.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  return {value, clean};
}

[[noreturn]] void bad_unit(const std::string& field, const std::string& suffix) {
  throw ConfigError(field + ": unknown unit suffix '" + suffix + "'");
}

}  // namespace

double length_m(const std::string& text, const std::string& field) {
  auto [v, u] = split(text, field);
  if (u.empty() || u == "m") return v;
  if (u == "km") return v * 1000.0;
  if (u == "cm") return v * 0.01;
  bad_unit(field, u);
}

double speed_mps(const std::string& text, const std::string& field) {
  auto [v, u] = split(text, field);
  if (u.empty() || u == "m/s" || u == "mps") return v;
  if (u == "km/s") return v * 1000.0;
  if (u == "km/h" || u == "kph" || u == "kmh") return v / 3.6;
  bad_unit(field, u);
}

double area_density_per_m2(const std::string& text, const std::string& field) {
  auto [v, u] = split(text, field);
  if (u.empty() || u == "/m^2" || u == "/m2" || u == "m^-2") return v;
  if (u == "/km^2" || u == "/km2" || u == "km^-2" || u == "perkm^2" || u == "perkm2") {
    return v * 1e-6;
  }
  bad_unit(field, u);
}

double power_w(const std::string& text, const std::string& field) {
  auto [v, u] = split(text, field);
  if (u.empty() || u == "w") return v;
  if (u == "mw") return v * 1e-3;
  if (u == "kw") return v * 1e3;
  if (u == "dbm") return std::pow(10.0, (v - 30.0) / 10.0);
  if (u == "dbw") return std::pow(10.0, v / 10.0);
  bad_unit(field, u);
}

double ratio_linear(const std::string& text, const std::string& field) {
  auto [v, u] = split(text, field);
  if (u.empty()) return v;
  if (u == "db") return std::pow(10.0, v / 10.0);
  bad_unit(field, u);
}

double frequency_hz(const std::string& text, const std::string& field) {
  auto [v, u] = split(text, field);
  if (u.empty() || u == "hz") return v;
  if (u == "khz") return v * 1e3;
  if (u == "mhz") return v * 1e6;
  if (u == "ghz") return v * 1e9;
  bad_unit(field, u);
}

double noise_power_w(const std::string& text, double bandwidth_hz,
                     const std::string& field) {
  auto [v, u] = split(text, field);
  if (u == "dbm/hz") {
    if (!(bandwidth_hz > 0.0)) {
      throw ConfigError(field + ": 'dBm/Hz' requires a positive bandwidth");
    }
    return std::pow(10.0, (v - 30.0) / 10.0) * bandwidth_hz;
  }
  if (u.empty() || u == "w") return v;
  if (u == "mw") return v * 1e-3;
  if (u == "dbm") return std::pow(10.0, (v - 30.0) / 10.0);
  if (u == "dbw") return std::pow(10.0, v / 10.0);
  bad_unit(field, u);
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  // Trim to the shortest representation that still round-trips.
  for (int prec = 1; prec < 17; ++prec) {
    char probe[40];
    std::snprintf(probe, sizeof(probe), "%.*g", prec, value);
    if (std::strtod(probe, nullptr) == value) {
      return probe;
    }
  }
  return buf;
}

}  // namespace uavharvest::units
