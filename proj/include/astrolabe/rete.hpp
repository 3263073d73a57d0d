#pragma once

// The rete: projected ecliptic with its zodiac graduation and star pointers.
//
// The rete is drawn at one rotation, given as a local sidereal angle in
// degrees: a body at right ascension ra sits at hour angle
// sidereal_angle - ra. The default of 270 puts the winter solstice on the
// upper meridian, the usual drawing orientation.

#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <string>
#include <vector>

#include "astrolabe/angles.hpp"
#include "astrolabe/csv.hpp"
#include "astrolabe/exceptions.hpp"
#include "astrolabe/geometry.hpp"
#include "astrolabe/plate.hpp"
#include "astrolabe/projection.hpp"

namespace astrolabe {

inline constexpr double default_sidereal_angle = 270.0;

struct StarEntry {
  std::string name;
  double ra = 0.0;
  double dec = 0.0;
  double magnitude = 0.0;
};

inline double capricorn_radius(double scale, double obliquity) {
  return scale * tan_deg(45.0 + obliquity / 2.0);
}

/// Projected ecliptic: tangent to Capricorn and Cancer at opposite ends of
/// the solstitial colure.
inline Circle ecliptic_circle(double scale, double obliquity,
                              double sidereal_angle = default_sidereal_angle) {
  const double r_cap = capricorn_radius(scale, obliquity);
  const double r_can = scale * tan_deg(45.0 - obliquity / 2.0);
  const double offset = (r_cap - r_can) / 2.0;
  const double h = sidereal_angle - 270.0;  // hour angle of longitude 270
  return {{offset * sin_deg(h), offset * cos_deg(h)}, (r_cap + r_can) / 2.0};
}

/// Equatorial position of ecliptic longitude `longitude` (latitude zero).
struct EquatorialPosition {
  double ra = 0.0;
  double dec = 0.0;
};

inline EquatorialPosition ecliptic_to_equatorial(double longitude, double obliquity) {
  const double sl = sin_deg(longitude);
  const double dec = rad_to_deg(std::asin(sin_deg(obliquity) * sl));
  const double ra = rad_to_deg(std::atan2(cos_deg(obliquity) * sl, cos_deg(longitude)));
  return {normalize_deg(ra), dec};
}

inline PlanePoint ecliptic_point(double longitude, double scale, double obliquity,
                                 double sidereal_angle = default_sidereal_angle) {
  const auto eq = ecliptic_to_equatorial(longitude, obliquity);
  return project_point({eq.dec, normalize_deg(sidereal_angle - eq.ra)}, scale);
}

inline PlanePoint star_pointer(const StarEntry& s, double scale, double obliquity,
                               double sidereal_angle = default_sidereal_angle) {
  if (s.dec <= -90.0) throw OutsidePlate("star '" + s.name + "' sits on the south pole");
  const double r = axis_projection_radius(s.dec, ProjectionKind::stereographic(), scale);
  // Boundary exclusive; the relative slack absorbs rounding between the two radius formulas.
  if (r >= capricorn_radius(scale, obliquity) * (1.0 - 1e-12))
    throw OutsidePlate("star '" + s.name + "' projects outside the Capricorn circle");
  return project_point({s.dec, normalize_deg(sidereal_angle - s.ra)}, scale);
}

/// Inverse of star_pointer for the same rotation.
inline EquatorialPosition pointer_to_equatorial(PlanePoint p, double scale,
                                                double sidereal_angle = default_sidereal_angle) {
  const auto sp = unproject_stereographic(p, scale);
  return {normalize_deg(sidereal_angle - sp.hour_angle), sp.dec};
}

struct ZodiacTick {
  double longitude = 0.0;
  PlanePoint point;
  bool major = false;  // sign boundary
};

struct StarPointer {
  StarEntry star;
  PlanePoint point;
};

struct SkippedStar {
  StarEntry star;
  std::string reason;
};

struct ReteModel {
  double scale = 0.0;
  double obliquity = default_obliquity;
  double sidereal_angle = default_sidereal_angle;
  Circle ecliptic;
  std::vector<ZodiacTick> zodiac_ticks;
  std::vector<StarPointer> pointers;
  std::vector<SkippedStar> skipped;
  Circle boundary;
};

inline void validate_catalog(const std::vector<StarEntry>& catalog) {
  std::set<std::string> names;
  for (const auto& s : catalog) {
    if (s.name.empty()) throw ConfigError("star catalog entry with an empty name");
    if (!(s.dec >= -90.0 && s.dec <= 90.0))
      throw ConfigError("star '" + s.name + "' has declination outside [-90, 90]");
    if (!(s.ra >= 0.0 && s.ra < 360.0))
      throw ConfigError("star '" + s.name + "' has right ascension outside [0, 360)");
    if (!names.insert(s.name).second) throw DuplicateStarName("duplicate star name '" + s.name + "'");
  }
}

inline ReteModel build_rete(const std::vector<StarEntry>& catalog, double scale, double obliquity,
                            double sidereal_angle = default_sidereal_angle) {
  validate_catalog(catalog);
  ReteModel m;
  m.scale = scale;
  m.obliquity = obliquity;
  m.sidereal_angle = sidereal_angle;
  m.ecliptic = ecliptic_circle(scale, obliquity, sidereal_angle);
  m.boundary = {{}, capricorn_radius(scale, obliquity)};
  for (int deg = 0; deg < 360; ++deg) {
    m.zodiac_ticks.push_back({static_cast<double>(deg),
                              ecliptic_point(deg, scale, obliquity, sidereal_angle), deg % 30 == 0});
  }
  for (const auto& s : catalog) {
    try {
      m.pointers.push_back({s, star_pointer(s, scale, obliquity, sidereal_angle)});
    } catch (const OutsidePlate& e) {
      m.skipped.push_back({s, e.what()});
    }
  }
  return m;
}

namespace detail {

inline StarEntry star_row(const std::vector<std::string>& f, const std::string& source, int line) {
  return {f[0], parse_number(f[1], source, line, field_column(f, 1)),
          parse_number(f[2], source, line, field_column(f, 2)),
          parse_number(f[3], source, line, field_column(f, 3))};
}

}  // namespace detail

/// Catalog CSV: header `name,ra_deg,dec_deg,mag`, decimal degrees.
inline std::vector<StarEntry> read_star_catalog(std::istream& in,
                                                const std::string& source = "<catalog>") {
  auto rows = detail::read_csv<StarEntry>(in, source, {"name", "ra_deg", "dec_deg", "mag"},
                                          &detail::star_row);
  validate_catalog(rows);
  return rows;
}

inline std::vector<StarEntry> load_star_catalog(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open star catalog '" + path + "'");
  return read_star_catalog(in, path);
}

}  // namespace astrolabe
