#include "uavharvest/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace uavharvest {
namespace {

using nlohmann::json;

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

std::string as_text(const json& v, const std::string& field) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) {
    return units::format_double(v.get<double>());
  }
  throw ConfigError(field + ": expected a number or a unit-suffixed string");
}

}  // namespace

void NetworkConfig::validate() const {
  require(lambda >= 0.0, "lambda: must be >= 0 (got " + units::format_double(lambda) + ")");
  require(mu > 0.0, "mu: must be > 0");
  require(w > 0.0, "w: must be > 0");
  require(w <= mu, "w: must satisfy w <= mu (got w=" + units::format_double(w) +
                       " m, mu=" + units::format_double(mu) + " m)");
  require(l > 0.0, "l: must be > 0");
  require(h > 0.0, "h: must be > 0");
  require(v > 0.0, "v: must be > 0");
  require(alpha > 1.0, "alpha: must be > 1 (got " + units::format_double(alpha) + ")");
  require(m >= 1, "m: must be a positive integer");
  require(omega > 0.0, "omega: must be > 0");
  require(p > 0.0, "p: must be > 0");
  require(tau > 0.0, "tau: must be > 0");
  require(noise >= 0.0, "noise: must be >= 0");
  if (mode == GridMode::TwoD) {
    require(nu > 0.0, "nu: must be > 0 in 2-D mode");
    require(l <= nu, "l: must satisfy l <= nu in 2-D mode (got l=" +
                         units::format_double(l) + " m, nu=" +
                         units::format_double(nu) + " m)");
    // Planar interference with alpha <= 2 is not summable; the infinite
    // product degenerates to 0.
    require(alpha > 2.0, "alpha: must be > 2 in 2-D mode");
  }
}

bool WindowGeom::overlaps(const WindowGeom& other) const {
  return std::abs(x_center - other.x_center) < half_w + other.half_w &&
         std::abs(y_center - other.y_center) < half_l + other.half_l;
}

WindowGeom window_center(const NetworkConfig& cfg, long i, double t_seconds) {
  WindowGeom g;
  g.x_center = static_cast<double>(i) * cfg.mu + cfg.v * t_seconds;
  g.y_center = 0.0;
  g.half_w = cfg.w / 2.0;
  g.half_l = cfg.l / 2.0;
  g.ix = i;
  g.iy = 0;
  return g;
}

WindowGeom window_center(const NetworkConfig& cfg, long i, long j,
                         double t_seconds) {
  WindowGeom g = window_center(cfg, i, t_seconds);
  g.y_center = static_cast<double>(j) * cfg.nu;
  g.iy = j;
  return g;
}

double FadingModel::ccdf(double x) const {
  if (x <= 0.0) return 1.0;
  const double y = static_cast<double>(m) * x / omega;
  double term = 1.0;
  double sum = 1.0;
  for (int i = 1; i < m; ++i) {
    term *= y / static_cast<double>(i);
    sum += term;
  }
  return std::exp(-y) * sum;
}

ModulationRule ModulationRule::fixed(int order) {
  if (order < 2) throw ConfigError("modulation: fixed order must be >= 2");
  ModulationRule r;
  r.derived_ = false;
  r.fixed_order_ = order;
  return r;
}

ModulationRule ModulationRule::derived() { return ModulationRule{}; }

int ModulationRule::order_for(double tau) const {
  if (!derived_) return fixed_order_;
  if (tau <= 0.0) return 1;
  const double e = std::floor(std::log2(1.0 + tau));
  return e <= 0.0 ? 1 : static_cast<int>(std::ldexp(1.0, static_cast<int>(e)));
}

double ModulationRule::bits_per_symbol(double tau) const {
  return std::log2(static_cast<double>(order_for(tau)));
}

std::string ModulationRule::describe() const {
  return derived_ ? "derived" : std::to_string(fixed_order_);
}

namespace {

NetworkConfig config_from_json(const json& doc) {
  require(doc.is_object(), "config: document must be a flat JSON object");

  static const std::map<std::string, int> known = {
      {"lambda", 0}, {"mu", 0},    {"nu", 0},        {"h", 0},
      {"w", 0},      {"l", 0},     {"v", 0},         {"alpha", 0},
      {"m", 0},      {"omega", 0}, {"p", 0},         {"tau", 0},
      {"noise", 0},  {"mode", 0},  {"bandwidth", 0}, {"modulation", 0},
  };
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (!known.count(it.key())) {
      throw ConfigError("config: unknown key '" + it.key() + "'");
    }
  }
  auto text = [&](const char* key) { return as_text(doc.at(key), key); };
  auto missing = [&](const char* key) {
    return !doc.contains(key) || doc.at(key).is_null();
  };
  for (const char* key : {"lambda", "mu", "h", "w", "l", "v", "alpha"}) {
    require(!missing(key), std::string("config: missing field '") + key + "'");
  }

  NetworkConfig cfg;
  cfg.lambda = units::area_density_per_m2(text("lambda"), "lambda");
  cfg.mu = units::length_m(text("mu"), "mu");
  cfg.h = units::length_m(text("h"), "h");
  cfg.w = units::length_m(text("w"), "w");
  cfg.l = units::length_m(text("l"), "l");
  cfg.v = units::speed_mps(text("v"), "v");
  cfg.alpha = units::ratio_linear(text("alpha"), "alpha");
  if (!missing("nu")) cfg.nu = units::length_m(text("nu"), "nu");
  if (!missing("m")) {
    const double mv = units::ratio_linear(text("m"), "m");
    require(mv == std::floor(mv), "m: must be a positive integer");
    cfg.m = static_cast<int>(mv);
  }
  if (!missing("omega")) cfg.omega = units::ratio_linear(text("omega"), "omega");
  if (!missing("p")) cfg.p = units::power_w(text("p"), "p");
  if (!missing("tau")) cfg.tau = units::ratio_linear(text("tau"), "tau");
  if (!missing("noise")) {
    double bandwidth = 0.0;
    if (!missing("bandwidth")) {
      bandwidth = units::frequency_hz(text("bandwidth"), "bandwidth");
    }
    cfg.noise = units::noise_power_w(text("noise"), bandwidth, "noise");
  }
  if (!missing("mode")) {
    const std::string mode = doc.at("mode").get<std::string>();
    if (mode == "1d" || mode == "1D") {
      cfg.mode = GridMode::OneD;
    } else if (mode == "2d" || mode == "2D") {
      cfg.mode = GridMode::TwoD;
    } else {
      throw ConfigError("mode: expected '1d' or '2d', got '" + mode + "'");
    }
  }
  cfg.validate();
  return cfg;
}

json parse_document(const std::string& json_text) {
  json doc = json::parse(json_text, nullptr, false);
  require(!doc.is_discarded(), "config: invalid JSON document");
  return doc;
}

}  // namespace

NetworkConfig load_config(const std::string& json_text) {
  return config_from_json(parse_document(json_text));
}

NetworkConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "config: cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return load_config(buf.str());
}

ModulationRule modulation_from_config(const std::string& json_text) {
  const json doc = parse_document(json_text);
  if (!doc.is_object() || !doc.contains("modulation") ||
      doc.at("modulation").is_null()) {
    return ModulationRule::derived();
  }
  const json& v = doc.at("modulation");
  if (v.is_string() && v.get<std::string>() == "derived") {
    return ModulationRule::derived();
  }
  if (v.is_number_integer()) {
    return ModulationRule::fixed(v.get<int>());
  }
  if (v.is_string()) {
    return ModulationRule::fixed(
        static_cast<int>(units::ratio_linear(v.get<std::string>(), "modulation")));
  }
  throw ConfigError("modulation: expected 'derived' or an integer order");
}

void apply_param_override(NetworkConfig& cfg, const std::string& key_value) {
  const auto eq = key_value.find('=');
  require(eq != std::string::npos && eq > 0,
          "param: expected key=value, got '" + key_value + "'");
  const std::string key = key_value.substr(0, eq);
  const std::string value = key_value.substr(eq + 1);

  if (key == "lambda") {
    cfg.lambda = units::area_density_per_m2(value, key);
  } else if (key == "mu") {
    cfg.mu = units::length_m(value, key);
  } else if (key == "nu") {
    cfg.nu = units::length_m(value, key);
  } else if (key == "h") {
    cfg.h = units::length_m(value, key);
  } else if (key == "w") {
    cfg.w = units::length_m(value, key);
  } else if (key == "l") {
    cfg.l = units::length_m(value, key);
  } else if (key == "v") {
    cfg.v = units::speed_mps(value, key);
  } else if (key == "alpha") {
    cfg.alpha = units::ratio_linear(value, key);
  } else if (key == "m") {
    cfg.m = static_cast<int>(units::ratio_linear(value, key));
  } else if (key == "omega") {
    cfg.omega = units::ratio_linear(value, key);
  } else if (key == "p") {
    cfg.p = units::power_w(value, key);
  } else if (key == "tau") {
    cfg.tau = units::ratio_linear(value, key);
  } else if (key == "noise") {
    cfg.noise = units::noise_power_w(value, 0.0, key);
  } else if (key == "mode") {
    if (value == "1d") {
      cfg.mode = GridMode::OneD;
    } else if (value == "2d") {
      cfg.mode = GridMode::TwoD;
    } else {
      throw ConfigError("mode: expected '1d' or '2d', got '" + value + "'");
    }
  } else {
    throw ConfigError("param: unknown key '" + key + "'");
  }
  cfg.validate();
}

std::string emit_config(const NetworkConfig& cfg) {
  json doc;
  // Raw SI doubles; format_double guarantees a lossless decimal round trip.
  auto put = [&](const char* key, double value) {
    doc[key] = json::parse(units::format_double(value));
  };
  put("lambda", cfg.lambda);
  put("mu", cfg.mu);
  if (cfg.nu > 0.0) put("nu", cfg.nu);
  put("h", cfg.h);
  put("w", cfg.w);
  put("l", cfg.l);
  put("v", cfg.v);
  put("alpha", cfg.alpha);
  doc["m"] = cfg.m;
  put("omega", cfg.omega);
  put("p", cfg.p);
  put("tau", cfg.tau);
  put("noise", cfg.noise);
  doc["mode"] = cfg.mode == GridMode::TwoD ? "2d" : "1d";
  return doc.dump(2);
}

}  // namespace uavharvest
