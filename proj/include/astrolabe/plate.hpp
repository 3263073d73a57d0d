#pragma once

// Tympan (latitude plate) geometry from closed-form meridian crossings.
//
// Frame: origin at the projected north celestial pole, +y along the upper
// meridian toward the projected zenith, plate angle = hour angle measured
// clockwise from +y. `scale` is the projected radius of the equator.

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "astrolabe/angles.hpp"
#include "astrolabe/exceptions.hpp"
#include "astrolabe/geometry.hpp"
#include "astrolabe/projection.hpp"

namespace astrolabe {

inline constexpr double default_obliquity = 23.44;

struct PlateConfig {
  double latitude = 40.0;
  double scale = 100.0;
  double obliquity = default_obliquity;
  double almucantar_step = 5.0;
  double azimuth_step = 10.0;
  bool hour_lines = true;

  void validate() const {
    auto divides = [](double step, double whole) {
      const double k = whole / step;
      return step > 0.0 && std::abs(k - std::round(k)) < 1e-9;
    };
    if (!(latitude > 0.0 && latitude < 90.0))
      throw ConfigError("latitude must lie in (0, 90), got " + std::to_string(latitude));
    if (!(scale > 0.0) || !std::isfinite(scale)) throw ConfigError("scale must be positive");
    if (!(obliquity >= 0.0 && obliquity < 30.0))
      throw ConfigError("obliquity must lie in [0, 30), got " + std::to_string(obliquity));
    if (!divides(almucantar_step, 90.0)) throw ConfigError("almucantar step must divide 90");
    if (!divides(azimuth_step, 360.0)) throw ConfigError("azimuth step must divide 360");
  }
};

/// Scale that puts the Capricorn circle at half of `diameter`.
inline double scale_from_diameter(double diameter, double obliquity = default_obliquity) {
  return (diameter / 2.0) / tan_deg(45.0 + obliquity / 2.0);
}

struct TropicCircles {
  Circle capricorn;
  Circle equator;
  Circle cancer;
};

inline TropicCircles tropic_circles(const PlateConfig& cfg) {
  const PlanePoint o{};
  return {{o, cfg.scale * tan_deg(45.0 + cfg.obliquity / 2.0)},
          {o, cfg.scale},
          {o, cfg.scale * tan_deg(45.0 - cfg.obliquity / 2.0)}};
}

/// Where a circle symmetric about the meridian crosses it.
struct MeridianSolution {
  double y_upper = 0.0;
  double y_lower = 0.0;
  double y_center = 0.0;
  double radius = 0.0;

  Circle circle() const { return {{0.0, y_center}, radius}; }
};

inline MeridianSolution meridian_solution(double y_upper, double y_lower) {
  return {y_upper, y_lower, (y_upper + y_lower) / 2.0, (y_upper - y_lower) / 2.0};
}

/// Circle of constant altitude `altitude` (degrees) at latitude `latitude`.
inline MeridianSolution almucantar_solution(double latitude, double altitude, double scale) {
  if (altitude >= 90.0)
    throw DomainError("almucantar at altitude 90 is the zenith point, not a circle");
  if (altitude < 0.0) throw DomainError("almucantar altitude must be >= 0");
  if (!(latitude + altitude > 0.0)) throw DomainError("latitude + altitude must be positive");
  const double y1 = scale / tan_deg((latitude + altitude) / 2.0);
  const double y2 = -scale * tan_deg((latitude - altitude) / 2.0);
  return meridian_solution(y1, y2);
}

inline PlanePoint zenith_point(double latitude, double scale) {
  return {0.0, scale * tan_deg(45.0 - latitude / 2.0)};
}

inline PlanePoint nadir_point(double latitude, double scale) {
  return {0.0, -scale * tan_deg(45.0 + latitude / 2.0)};
}

/// Vertical circle at offset `offset_deg` from the prime vertical. Every one
/// of them passes through the projected zenith and nadir, so all centres
/// share the ordinate midway between the two; the prime vertical's radius is
/// half their separation. The circle holds compass bearings 90 - A and
/// 270 - A.
inline Circle azimuth_circle(double latitude, double offset_deg, double scale) {
  if (!(latitude > 0.0 && latitude < 90.0)) throw DomainError("latitude must lie in (0, 90)");
  const double ca = cos_deg(offset_deg);
  if (std::abs(ca) < 1e-12)
    throw DomainError("azimuth 90 deg from the prime vertical is the meridian line");
  const double y_zenith = zenith_point(latitude, scale).y;
  const double y_nadir = nadir_point(latitude, scale).y;
  const double y_center = (y_zenith + y_nadir) / 2.0;
  const double prime = (y_zenith - y_nadir) / 2.0;
  return {{prime * tan_deg(offset_deg), y_center}, prime / std::abs(ca)};
}

inline Circle horizon_circle(double latitude, double scale) {
  return almucantar_solution(latitude, 0.0, scale).circle();
}

/// One unequal-hour boundary. Collinear defining points (the midnight line)
/// fall back to a straight segment and set `straight`.
struct HourLine {
  int index = 0;
  std::variant<Arc, Segment> curve;
  std::array<PlanePoint, 3> defining_points;  // Cancer, equator, Capricorn
  bool straight = false;
};

/// Below-horizon arc of a circle centred on the pole, running clockwise
/// (increasing hour angle) from the western horizon crossing.
inline Arc night_arc(const Circle& parallel, const Circle& horizon) {
  const auto hits = circle_circle_intersection(parallel, horizon);
  if (hits.size() != 2)
    throw ArcticLatitude("parallel of radius " + std::to_string(parallel.radius) +
                         " never crosses the horizon (latitude >= 90 - obliquity)");
  const PlanePoint west = hits[0].x > hits[1].x ? hits[0] : hits[1];
  const PlanePoint east = hits[0].x > hits[1].x ? hits[1] : hits[0];
  return Arc(parallel, parallel.angle_of(west), parallel.angle_of(east), Orientation::cw);
}

inline std::vector<HourLine> hour_lines(const PlateConfig& cfg) {
  if (cfg.latitude >= 90.0 - cfg.obliquity)
    throw ArcticLatitude("hour lines need latitude < 90 - obliquity (" +
                         std::to_string(90.0 - cfg.obliquity) + "), got " +
                         std::to_string(cfg.latitude));
  const auto tropics = tropic_circles(cfg);
  const Circle horizon = horizon_circle(cfg.latitude, cfg.scale);
  const auto cancer = divide_arc_equal(night_arc(tropics.cancer, horizon), 12);
  const auto equator = divide_arc_equal(night_arc(tropics.equator, horizon), 12);
  const auto capricorn = divide_arc_equal(night_arc(tropics.capricorn, horizon), 12);

  std::vector<HourLine> out;
  for (int k = 1; k <= 11; ++k) {
    const auto i = static_cast<std::size_t>(k);
    const std::array<PlanePoint, 3> pts{cancer[i], equator[i], capricorn[i]};
    try {
      out.push_back({k, arc_through(pts[0], pts[1], pts[2]), pts, false});
    } catch (const CollinearPoints&) {
      out.push_back({k, Segment{pts[0], pts[2]}, pts, true});
    }
  }
  return out;
}

struct AlmucantarEntry {
  double altitude = 0.0;
  std::vector<Curve> pieces;
  std::optional<PlanePoint> marker;  // set only for altitude 90 (the zenith)
};

struct AzimuthEntry {
  double offset = 0.0;  // from the prime vertical
  std::vector<Curve> pieces;
};

struct PlateModel {
  PlateConfig config;
  TropicCircles tropics;
  std::vector<Curve> horizon;
  std::vector<AlmucantarEntry> almucantars;
  PlanePoint zenith;
  std::vector<AzimuthEntry> azimuths;
  std::optional<Segment> meridian;
  std::vector<HourLine> hours;
  Circle boundary;
};

inline PlateModel build_plate(const PlateConfig& cfg) {
  cfg.validate();
  PlateModel m;
  m.config = cfg;
  m.tropics = tropic_circles(cfg);
  m.boundary = m.tropics.capricorn;

  const ClipRegion in_plate{m.boundary, true};
  const Circle horizon = horizon_circle(cfg.latitude, cfg.scale);
  const ClipRegion above_horizon{horizon, true};

  m.horizon = clip_circle(horizon, {in_plate});

  const int n_alm = static_cast<int>(std::lround(90.0 / cfg.almucantar_step));
  for (int i = 0; i < n_alm; ++i) {
    const double h = i * cfg.almucantar_step;
    auto pieces = clip_circle(almucantar_solution(cfg.latitude, h, cfg.scale).circle(), {in_plate});
    if (!pieces.empty()) m.almucantars.push_back({h, std::move(pieces), std::nullopt});
  }
  m.zenith = zenith_point(cfg.latitude, cfg.scale);
  m.almucantars.push_back({90.0, {}, m.zenith});

  const int n_az = static_cast<int>(std::lround(180.0 / cfg.azimuth_step));
  for (int i = 0; i < n_az; ++i) {
    const double a = i * cfg.azimuth_step;
    if (std::abs(cos_deg(a)) < 1e-12) continue;
    auto pieces = clip_circle(azimuth_circle(cfg.latitude, a, cfg.scale), {above_horizon, in_plate});
    if (!pieces.empty()) m.azimuths.push_back({a, std::move(pieces)});
  }
  const auto h0 = almucantar_solution(cfg.latitude, 0.0, cfg.scale);
  const double top = std::min(h0.y_upper, m.boundary.radius);
  const double bottom = std::max(h0.y_lower, -m.boundary.radius);
  if (top > bottom) m.meridian = Segment{{0.0, bottom}, {0.0, top}};

  if (cfg.hour_lines) m.hours = hour_lines(cfg);
  return m;
}

}  // namespace astrolabe
