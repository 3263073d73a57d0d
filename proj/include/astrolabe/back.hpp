#pragma once

// Back of the instrument: altitude limb, sine quadrant, shadow square,
// zodiac calendar, midday curves and qibla curves.
//
// Face frame: origin at the alidade pivot, +y up, angles in degrees. Midday
// and qibla curves live in the upper-right quadrant: altitude maps linearly
// to radius (limb = 0, centre = 90) and declination -eps..+eps maps linearly
// to polar angle 0..90.

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "astrolabe/angles.hpp"
#include "astrolabe/csv.hpp"
#include "astrolabe/exceptions.hpp"
#include "astrolabe/geometry.hpp"
#include "astrolabe/plate.hpp"
#include "astrolabe/projection.hpp"

namespace astrolabe {

struct Locality {
  double latitude = 0.0;
  double longitude = 0.0;  // east-positive, (-180, 180]
  std::string name;

  static Locality make(double lat, double lon, std::string name = {}) {
    if (!(std::abs(lat) <= 90.0))
      throw ConfigError("latitude " + std::to_string(lat) + " outside [-90, 90]");
    if (!std::isfinite(lon)) throw ConfigError("longitude must be finite");
    return {lat, normalize_deg_signed(lon), std::move(name)};
  }
};

inline const Locality mecca_default{21.4225, 39.8262, "Mecca"};

// ---------------------------------------------------------------- solar model

/// Single-year solar model: mean anomaly counted from a configurable day,
/// two-term equation of centre. Defaults reproduce the 2025 almanac.
struct SolarEpoch {
  int year = 2025;
  double mean_anomaly_zero_day = 2.4988;  // days after Jan 1 0h UT
  double perihelion_longitude = 282.932;
  int days = 365;
};

/// Apparent-free ecliptic longitude of the Sun at noon UT of `day` (1-based).
inline double solar_longitude(int day, const SolarEpoch& epoch = {}) {
  if (day < 1 || day > epoch.days)
    throw DomainError("day of year must lie in [1, " + std::to_string(epoch.days) + "]");
  const double t = (day - 1) + 0.5;
  const double mean_anomaly = 360.0 * (t - epoch.mean_anomaly_zero_day) / epoch.days;
  const double m = deg_to_rad(mean_anomaly);
  return normalize_deg(epoch.perihelion_longitude + mean_anomaly + 1.915 * std::sin(m) +
                       0.020 * std::sin(2.0 * m));
}

inline double solar_declination(double longitude, double obliquity) {
  return rad_to_deg(std::asin(sin_deg(obliquity) * sin_deg(longitude)));
}

struct SolarPosition {
  int day = 1;
  double longitude = 0.0;
  double declination = 0.0;
};

inline SolarPosition solar_position(int day, double obliquity, const SolarEpoch& epoch = {}) {
  const double lon = solar_longitude(day, epoch);
  return {day, lon, solar_declination(lon, obliquity)};
}

/// Ring angle (degrees, [0, 360)) of every day tick: the Sun's longitude.
inline std::vector<double> calendar_ring(const SolarEpoch& epoch = {}) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(epoch.days));
  for (int d = 1; d <= epoch.days; ++d) out.push_back(solar_longitude(d, epoch));
  return out;
}

/// Gaps between consecutive ticks, including the wrap from the last tick
/// back to the first; they sum to 360.
inline std::vector<double> calendar_spacing(const std::vector<double>& ring) {
  std::vector<double> gaps;
  for (std::size_t i = 0; i < ring.size(); ++i)
    gaps.push_back(normalize_deg(ring[(i + 1) % ring.size()] - ring[i]));
  return gaps;
}

// ---------------------------------------------------------------- scales

struct SineQuadrant {
  double radius = 0.0;
  int divisions = 0;
  double spacing = 0.0;
  std::vector<Segment> vertical;    // x = k * spacing
  std::vector<Segment> horizontal;  // y = k * spacing
};

/// Quarter disc in the first quadrant with its radius cut into `n` parts and
/// the orthogonal grid through each cut.
inline SineQuadrant sine_quadrant(int n, double radius) {
  if (n < 1) throw DomainError("sine quadrant needs at least one division");
  if (!(radius > 0.0)) throw DomainError("sine quadrant radius must be positive");
  SineQuadrant q{radius, n, radius / n, {}, {}};
  for (int k = 1; k <= n; ++k) {
    const double c = radius * k / n;
    const double reach = std::sqrt(std::max(0.0, radius * radius - c * c));
    q.vertical.push_back({{c, 0.0}, {c, reach}});
    q.horizontal.push_back({{0.0, c}, {reach, c}});
  }
  return q;
}

struct ShadowMark {
  int k = 0;
  double altitude = 0.0;  // degrees
  Segment tick;
};

/// Square hanging below the pivot, x in [0, side], y in [-side, 0]. The
/// bottom edge carries umbra recta (altitude atan(digits/k)), the outer edge
/// umbra versa (atan(k/digits)); both reach 45 at k = digits, the corner.
struct ShadowSquare {
  double side = 0.0;
  int digits = 0;
  std::vector<ShadowMark> recta;
  std::vector<ShadowMark> versa;
};

inline ShadowSquare shadow_square(double side, int digits = 12) {
  if (digits < 1) throw DomainError("shadow square needs at least one digit");
  if (!(side > 0.0)) throw DomainError("shadow square side must be positive");
  ShadowSquare sq{side, digits, {}, {}};
  const double tick = side / 20.0;
  for (int k = 1; k <= digits; ++k) {
    const double pos = side * k / digits;
    sq.recta.push_back({k, rad_to_deg(std::atan2(digits, k)), {{pos, -side}, {pos, -side + tick}}});
    sq.versa.push_back({k, rad_to_deg(std::atan2(k, digits)), {{side, -pos}, {side - tick, -pos}}});
  }
  return sq;
}

struct FaceLabel {
  PlanePoint at;
  std::string text;
};

/// Altitude limb: 0..90 graduations in both upper quadrants.
struct DegreeScale {
  Circle outer;
  Circle inner;
  std::vector<Segment> ticks;
  std::vector<FaceLabel> labels;
};

inline DegreeScale degree_scale(double radius, double band) {
  DegreeScale s{{{}, radius}, {{}, radius - band}, {}, {}};
  for (int side = 0; side < 2; ++side) {
    for (int a = 0; a <= 90; ++a) {
      if (side == 1 && (a == 0 || a == 90)) continue;  // shared with the first side
      const double theta = side == 0 ? a : 180.0 - a;
      const double len = a % 10 == 0 ? band : (a % 5 == 0 ? 0.6 * band : 0.35 * band);
      const PlanePoint dir{cos_deg(theta), sin_deg(theta)};
      s.ticks.push_back({radius * dir, (radius - len) * dir});
      if (a % 10 == 0 && (side == 0 || a != 90))
        s.labels.push_back({(radius - 1.6 * band) * dir, std::to_string(a)});
    }
  }
  return s;
}

// ---------------------------------------------------------------- midday

inline double midday_altitude(double latitude, double declination) {
  return 90.0 - latitude + declination;
}

/// Face position of (altitude, declination) in the curve quadrant.
inline PlanePoint back_polar_point(double altitude, double declination, double obliquity,
                                   double face_radius) {
  const double rho = face_radius * (90.0 - altitude) / 90.0;
  const double theta = 90.0 * (declination + obliquity) / (2.0 * obliquity);
  return {rho * cos_deg(theta), rho * sin_deg(theta)};
}

struct MiddayCurve {
  double latitude = 0.0;
  std::array<double, 3> declinations{};
  std::array<double, 3> altitudes{};
  std::array<PlanePoint, 3> control_points{};
  Arc arc;
};

inline MiddayCurve midday_curve(double latitude, double obliquity, double face_radius) {
  if (!(obliquity > 0.0)) throw DomainError("midday curves need a positive obliquity");
  const std::array<double, 3> decs{-obliquity, 0.0, obliquity};
  std::array<double, 3> hs{};
  std::array<PlanePoint, 3> pts{};
  for (std::size_t i = 0; i < 3; ++i) {
    hs[i] = midday_altitude(latitude, decs[i]);
    if (!(hs[i] > 0.0 && hs[i] <= 90.0))
      throw DomainError("midday altitude " + std::to_string(hs[i]) + " at latitude " +
                        std::to_string(latitude) + " leaves (0, 90]");
    pts[i] = back_polar_point(hs[i], decs[i], obliquity, face_radius);
  }
  return {latitude, decs, hs, pts, arc_through(pts[0], pts[1], pts[2])};
}

// ---------------------------------------------------------------- qibla

namespace detail {
inline Vec3 earth_vector(const Locality& l) {
  const double cl = cos_deg(l.latitude);
  return {cl * cos_deg(l.longitude), cl * sin_deg(l.longitude), sin_deg(l.latitude)};
}
}  // namespace detail

/// Initial great-circle bearing, degrees clockwise from north, from unit
/// vectors: the target's tangent component resolved on local east/north.
inline double bearing_oracle(const Locality& from, const Locality& to) {
  const Vec3 p = detail::earth_vector(from);
  const Vec3 q = detail::earth_vector(to);
  if (norm(cross(p, q)) < 1e-9)
    throw UndefinedBearing("bearing undefined between coincident or antipodal points");
  const Vec3 east_raw = cross(Vec3{0.0, 0.0, 1.0}, p);
  if (norm(east_raw) < 1e-12) throw UndefinedBearing("bearing undefined at a geographic pole");
  const Vec3 east = normalized(east_raw);
  const Vec3 north = cross(p, east);
  const Vec3 tangent = q - dot(p, q) * p;
  return normalize_deg(rad_to_deg(std::atan2(dot(tangent, east), dot(tangent, north))));
}

/// The printed qibla relation, evaluated as written with a two-argument
/// arctangent. It does not agree with bearing_oracle in general.
inline double qibla_eq13(const Locality& obs, const Locality& mecca = mecca_default) {
  const double dlon = mecca.longitude - obs.longitude;
  const double num = cos_deg(mecca.latitude) * sin_deg(dlon);
  const double den = cos_deg(mecca.latitude) * sin_deg(obs.latitude) -
                     sin_deg(mecca.latitude) * cos_deg(obs.latitude) * cos_deg(dlon);
  if (std::abs(num) < 1e-15 && std::abs(den) < 1e-15)
    throw UndefinedBearing("qibla relation is 0/0 at this location");
  return normalize_deg(rad_to_deg(std::atan2(num, den)));
}

/// sin(dec) = sin(lat) sin(h) + cos(lat) cos(h) cos(A), A from north.
/// Evaluated with atan2 over the full direction vector so the poles keep
/// full precision.
inline double declination_from_alt_az(double latitude, double altitude, double azimuth) {
  const double up = sin_deg(latitude) * sin_deg(altitude) +
                    cos_deg(latitude) * cos_deg(altitude) * cos_deg(azimuth);
  const double meridian = cos_deg(latitude) * sin_deg(altitude) -
                          sin_deg(latitude) * cos_deg(altitude) * cos_deg(azimuth);
  const double east = cos_deg(altitude) * sin_deg(azimuth);
  return rad_to_deg(std::atan2(up, std::hypot(meridian, east)));
}

/// Altitude in [0, 90] at which a body of declination `declination` stands
/// at azimuth `azimuth`. When two altitudes qualify the lower one is
/// returned.
inline double solve_altitude_for_azimuth(double latitude, double declination, double azimuth) {
  const double a = sin_deg(latitude);
  const double b = cos_deg(latitude) * cos_deg(azimuth);
  const double s = sin_deg(declination);
  const double amp = std::hypot(a, b);
  if (amp < 1e-15) {
    if (std::abs(s) < 1e-15) return 0.0;
    throw NoSolution("no altitude reaches this declination at this azimuth");
  }
  if (std::abs(s) > amp)
    throw NoSolution("|sin dec| exceeds the reachable range at azimuth " + std::to_string(azimuth));
  const double phase = std::atan2(b, a);
  const double base = std::asin(std::clamp(s / amp, -1.0, 1.0));
  const double tol = 1e-12;
  double best = INFINITY;
  for (double h : {base - phase, pi - base - phase}) {
    h = std::remainder(h, two_pi);
    if (h >= -tol && h <= pi / 2.0 + tol) best = std::min(best, std::clamp(h, 0.0, pi / 2.0));
  }
  if (!std::isfinite(best))
    throw NoSolution("body never reaches azimuth " + std::to_string(azimuth) + " above the horizon");
  return rad_to_deg(best);
}

struct QiblaMark {
  Locality locality;
  double bearing = 0.0;  // degrees from north
  Segment tick;          // on the limb, north up, east right
};

struct QiblaCurve {
  Locality locality;
  double bearing = 0.0;
  std::vector<PlanePoint> points;
};

// ---------------------------------------------------------------- assembly

struct BackConfig {
  double limb_radius = 100.0;
  double obliquity = default_obliquity;
  int sine_divisions = 60;
  int shadow_digits = 12;
  std::vector<double> midday_latitudes{40.0};
  Locality mecca = mecca_default;
  SolarEpoch epoch{};

  void validate() const {
    if (!(limb_radius > 0.0)) throw ConfigError("limb radius must be positive");
    if (!(obliquity > 0.0 && obliquity < 30.0)) throw ConfigError("obliquity must lie in (0, 30)");
    if (sine_divisions < 1) throw ConfigError("sine quadrant needs at least one division");
    if (shadow_digits < 1) throw ConfigError("shadow square needs at least one digit");
  }
};

struct CalendarTick {
  int day = 0;
  double longitude = 0.0;
  Segment tick;
};

struct CalendarRing {
  Circle outer;
  Circle inner;
  std::vector<CalendarTick> ticks;
  std::vector<FaceLabel> month_labels;
};

struct BackModel {
  BackConfig config;
  DegreeScale limb;
  SineQuadrant sine;  // mirrored into the upper-left quadrant
  ShadowSquare shadow;
  CalendarRing calendar;
  std::vector<MiddayCurve> midday_curves;
  std::vector<QiblaMark> qibla_marks;
  std::vector<QiblaCurve> qibla_curves;
  Circle boundary;
};

/// Radii of the back-face bands as fractions of the limb radius.
struct BackLayout {
  static constexpr double limb_band = 0.07;
  static constexpr double calendar_outer = 0.92;
  static constexpr double calendar_inner = 0.86;
  static constexpr double curve_face = 0.84;
  static constexpr double shadow_side = 0.55;
};

inline BackModel build_back(const BackConfig& cfg, const std::vector<Locality>& localities) {
  cfg.validate();
  const double r = cfg.limb_radius;
  BackModel m;
  m.config = cfg;
  m.boundary = {{}, r};
  m.limb = degree_scale(r, BackLayout::limb_band * r);

  // Sine quadrant, mirrored into the upper-left quadrant.
  m.sine = sine_quadrant(cfg.sine_divisions, BackLayout::curve_face * r);
  auto mirror = [](Segment s) { return Segment{{-s.a.x, s.a.y}, {-s.b.x, s.b.y}}; };
  for (auto& s : m.sine.vertical) s = mirror(s);
  for (auto& s : m.sine.horizontal) s = mirror(s);

  m.shadow = shadow_square(BackLayout::shadow_side * r, cfg.shadow_digits);

  // Calendar ring in the lower half, longitude measured clockwise from +x.
  const double ro = BackLayout::calendar_outer * r;
  const double ri = BackLayout::calendar_inner * r;
  m.calendar.outer = {{}, ro};
  m.calendar.inner = {{}, ri};
  static constexpr std::array<int, 12> month_start{1, 32, 60, 91, 121, 152,
                                                   182, 213, 244, 274, 305, 335};
  static constexpr std::array<const char*, 12> month_name{"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                                          "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
  const auto ring = calendar_ring(cfg.epoch);
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const int day = static_cast<int>(i) + 1;
    const PlanePoint dir{cos_deg(-ring[i]), sin_deg(-ring[i])};
    const bool month = std::find(month_start.begin(), month_start.end(), day) != month_start.end();
    const double inner = month ? ri - 0.02 * r : ri;
    m.calendar.ticks.push_back({day, ring[i], {ro * dir, inner * dir}});
  }
  for (std::size_t k = 0; k < month_start.size(); ++k) {
    if (month_start[k] > cfg.epoch.days) break;
    const double lon = ring[static_cast<std::size_t>(month_start[k] - 1)] + 15.0;
    const PlanePoint dir{cos_deg(-lon), sin_deg(-lon)};
    m.calendar.month_labels.push_back({(ri - 0.05 * r) * dir, month_name[k]});
  }

  const double face = BackLayout::curve_face * r;
  for (double lat : cfg.midday_latitudes) m.midday_curves.push_back(midday_curve(lat, cfg.obliquity, face));

  for (const auto& loc : localities) {
    const double bearing = bearing_oracle(loc, cfg.mecca);
    const PlanePoint dir{sin_deg(bearing), cos_deg(bearing)};
    m.qibla_marks.push_back({loc, bearing, {r * dir, (r + 0.05 * r) * dir}});
    QiblaCurve curve{loc, bearing, {}};
    constexpr int samples = 48;
    for (int i = 0; i <= samples; ++i) {
      const double dec = -cfg.obliquity + 2.0 * cfg.obliquity * i / samples;
      try {
        const double h = solve_altitude_for_azimuth(loc.latitude, dec, bearing);
        curve.points.push_back(back_polar_point(h, dec, cfg.obliquity, face));
      } catch (const NoSolution&) {
      }
    }
    m.qibla_curves.push_back(std::move(curve));
  }
  return m;
}

namespace detail {
inline Locality locality_row(const std::vector<std::string>& f, const std::string& source, int line) {
  const double lat = parse_number(f[1], source, line, field_column(f, 1));
  const double lon = parse_number(f[2], source, line, field_column(f, 2));
  if (f[0].empty()) throw ParseError(source, line, 1, "locality name is empty");
  if (!(std::abs(lat) <= 90.0))
    throw ParseError(source, line, field_column(f, 1), "latitude outside [-90, 90]");
  return Locality::make(lat, lon, f[0]);
}
}  // namespace detail

/// Localities CSV: header `name,lat_deg,lon_deg`.
inline std::vector<Locality> read_localities(std::istream& in, const std::string& source = "<localities>") {
  return detail::read_csv<Locality>(in, source, {"name", "lat_deg", "lon_deg"}, &detail::locality_row);
}

inline std::vector<Locality> load_localities(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open localities file '" + path + "'");
  return read_localities(in, path);
}

}  // namespace astrolabe
