#pragma once

// Run configuration shared by every CLI subcommand, plus the `key = value`
// file format accepted by --config. Keys are the long flag names without
// the leading dashes; see README.md for the list.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "astrolabe/back.hpp"
#include "astrolabe/exceptions.hpp"
#include "astrolabe/plate.hpp"
#include "astrolabe/render.hpp"

namespace astrolabe {

struct RunConfig {
  double lat = 40.0;
  double lon = 0.0;
  std::optional<double> scale_mm;
  std::optional<double> diameter_mm;
  double obliquity = default_obliquity;
  double almucantar_step = 5.0;
  double azimuth_step = 10.0;
  bool hour_lines = true;
  std::string catalog;
  std::string localities;
  std::uint64_t seed = 1;
  std::string out;
  bool mirror_ew = false;
  int precision = 4;
  double sidereal_angle = default_sidereal_angle;
  double mecca_lat = mecca_default.latitude;
  double mecca_lon = mecca_default.longitude;
  std::vector<std::string> layers;

  /// Equator radius: --scale-mm wins, then --diameter-mm, then 100 mm.
  double scale() const {
    if (scale_mm && diameter_mm)
      throw ConfigError("give either scale-mm or diameter-mm, not both");
    if (scale_mm) {
      if (!(*scale_mm > 0.0)) throw ConfigError("scale-mm must be positive");
      return *scale_mm;
    }
    if (diameter_mm) {
      if (!(*diameter_mm > 0.0)) throw ConfigError("diameter-mm must be positive");
      return scale_from_diameter(*diameter_mm, obliquity);
    }
    return 100.0;
  }

  PlateConfig plate_config() const {
    PlateConfig c;
    c.latitude = lat;
    c.scale = scale();
    c.obliquity = obliquity;
    c.almucantar_step = almucantar_step;
    c.azimuth_step = azimuth_step;
    c.hour_lines = hour_lines;
    c.validate();
    return c;
  }

  BackConfig back_config() const {
    BackConfig c;
    c.limb_radius = scale() * tan_deg(45.0 + obliquity / 2.0);
    c.obliquity = obliquity;
    c.midday_latitudes = {lat};
    c.mecca = Locality::make(mecca_lat, mecca_lon, "Mecca");
    c.validate();
    return c;
  }

  RenderStyle render_style() const {
    RenderStyle s;
    s.precision = precision;
    s.mirror_ew = mirror_ew;
    s.include_layers.insert(layers.begin(), layers.end());
    s.validate();
    return s;
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline bool parse_bool(const std::string& v, bool& out) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") {
    out = true;
    return true;
  }
  if (v == "false" || v == "0" || v == "no" || v == "off") {
    out = false;
    return true;
  }
  return false;
}

inline std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace detail

inline const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "lat",        "lon",       "scale-mm",  "diameter-mm", "obliquity",      "almucantar-step",
      "azimuth-step", "hour-lines", "catalog", "localities",  "seed",           "out",
      "mirror-ew",  "precision", "sidereal-angle", "mecca-lat", "mecca-lon",   "layers"};
  return keys;
}

/// Sets one key from its textual value. `line`/`column` locate the value
/// for error messages.
inline void apply_config_value(RunConfig& cfg, const std::string& key, const std::string& value,
                               const std::string& source, int line, int column) {
  auto number = [&]() -> double {
    try {
      std::size_t used = 0;
      const double v = std::stod(value, &used);
      if (used != value.size() || !std::isfinite(v)) throw std::invalid_argument(value);
      return v;
    } catch (const std::exception&) {
      throw ParseError(source, line, column, "key '" + key + "' expects a number, got '" + value + "'");
    }
  };
  auto integer = [&]() -> long long {
    const double v = number();
    if (v != std::floor(v)) throw ParseError(source, line, column, "key '" + key + "' expects an integer");
    return static_cast<long long>(v);
  };
  auto boolean = [&]() -> bool {
    bool b = false;
    if (!detail::parse_bool(value, b))
      throw ParseError(source, line, column, "key '" + key + "' expects true or false");
    return b;
  };

  if (key == "lat") cfg.lat = number();
  else if (key == "lon") cfg.lon = number();
  else if (key == "scale-mm") cfg.scale_mm = number();
  else if (key == "diameter-mm") cfg.diameter_mm = number();
  else if (key == "obliquity") cfg.obliquity = number();
  else if (key == "almucantar-step") cfg.almucantar_step = number();
  else if (key == "azimuth-step") cfg.azimuth_step = number();
  else if (key == "hour-lines") cfg.hour_lines = boolean();
  else if (key == "catalog") cfg.catalog = value;
  else if (key == "localities") cfg.localities = value;
  else if (key == "seed") {
    const long long s = integer();
    if (s < 0) throw ParseError(source, line, column, "seed must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(s);
  } else if (key == "out") cfg.out = value;
  else if (key == "mirror-ew") cfg.mirror_ew = boolean();
  else if (key == "precision") cfg.precision = static_cast<int>(integer());
  else if (key == "sidereal-angle") cfg.sidereal_angle = number();
  else if (key == "mecca-lat") cfg.mecca_lat = number();
  else if (key == "mecca-lon") cfg.mecca_lon = number();
  else if (key == "layers") cfg.layers = detail::split_list(value);
  else throw UnknownKey(key, line);
}

/// Parses `key = value` lines; blank lines and `#` comments are skipped.
inline RunConfig parse_config(std::istream& in, const std::string& source, RunConfig cfg = {}) {
  std::string raw;
  int line_no = 0;
  std::set<std::string> seen;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const auto first = raw.find_first_not_of(" \t");
    if (first == std::string::npos || raw[first] == '#') continue;
    const auto eq = raw.find('=');
    if (eq == std::string::npos)
      throw ParseError(source, line_no, static_cast<int>(first) + 1, "expected 'key = value'");
    const std::string key = detail::trim(raw.substr(0, eq));
    if (key.empty()) throw ParseError(source, line_no, static_cast<int>(first) + 1, "missing key before '='");
    const auto vstart = raw.find_first_not_of(" \t", eq + 1);
    const int column = vstart == std::string::npos ? static_cast<int>(raw.size()) + 1
                                                   : static_cast<int>(vstart) + 1;
    const std::string value = detail::trim(raw.substr(eq + 1));
    if (!seen.insert(key).second)
      throw ParseError(source, line_no, static_cast<int>(first) + 1, "key '" + key + "' set twice");
    apply_config_value(cfg, key, value, source, line_no, column);
  }
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  return parse_config(in, path);
}

}  // namespace astrolabe
