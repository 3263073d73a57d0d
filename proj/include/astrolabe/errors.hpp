#pragma once

// Engraving and construction errors and what they do to readings.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "astrolabe/angles.hpp"
#include "astrolabe/exceptions.hpp"
#include "astrolabe/geometry.hpp"
#include "astrolabe/plate.hpp"
#include "astrolabe/projection.hpp"

namespace astrolabe::errors {

// ---------------------------------------------------------------- alidade

struct AlidadeSpec {
  double length = 0.0;                // mm
  double pointer_line_offset = 0.0;   // rad
  double rotation_axis_offset = 0.0;  // caller's unit
  double sight_axis_error = 0.0;      // rad
};

/// Displacement from a pointer line offset by `offset_rad` on an alidade of
/// `length`: length * offset / 4.
inline double alidade_offset_error(double length, double offset_rad) {
  if (!(length > 0.0)) throw DomainError("alidade length must be positive");
  return length * offset_rad / 4.0;
}

/// Rotation-axis offset error: a quarter of the offset, in the offset's own unit.
inline double alidade_rotation_error(double axis_offset) {
  if (axis_offset < 0.0) throw DomainError("rotation axis offset must be >= 0");
  return axis_offset / 4.0;
}

/// Sight-axis acceptance rule: the altitude of one target read through
/// both ends of the alidade must agree.
inline bool sight_axis_consistent(double reading_a, double reading_b, double tol) {
  return std::abs(reading_a - reading_b) <= tol;
}

// ---------------------------------------------------------------- arcs

struct ArcErrorSpec {
  double ds = 0.0;
  double dp = 0.0;
  double dalpha = 0.0;
  double p = 0.0;
};

inline double arc_displacement(double ds, double dp) { return std::hypot(ds, dp); }

inline double arc_displacement_angular(double p, double dalpha, double dp) {
  if (!(p > 0.0)) throw DomainError("arc radius must be positive");
  return std::hypot(p * dalpha, dp);
}

struct BandReport {
  double spacing = 0.0;             // |Y2(h) - Y2(h + step)| on the meridian
  double displacement = 0.0;        // fraction * p(h)
  double displaced_altitude = 0.0;  // almucantar whose lower crossing the point reaches
  double lands_on_band = 0.0;       // last almucantar of the step grid crossed
};

/// Meridian-line view of a radius error on almucantar `altitude`: the lower
/// meridian crossing moves by fraction * radius toward the plate centre
/// (higher altitudes for positive fractions) and may pass the neighbouring
/// almucantars `band_step` apart.
inline BandReport band_misassignment(const PlateConfig& cfg, double altitude,
                                     double radius_error_fraction, double band_step = 3.0) {
  if (!(band_step > 0.0)) throw DomainError("band step must be positive");
  const auto here = almucantar_solution(cfg.latitude, altitude, cfg.scale);
  const auto next = almucantar_solution(cfg.latitude, altitude + band_step, cfg.scale);
  BandReport r;
  r.spacing = std::abs(here.y_lower - next.y_lower);
  const double shift = radius_error_fraction * here.radius;
  r.displacement = std::abs(shift);
  const double y = here.y_lower + shift;
  r.displaced_altitude = cfg.latitude + 2.0 * rad_to_deg(std::atan(y / cfg.scale));
  const double bands = (r.displaced_altitude - altitude) / band_step;
  r.lands_on_band = altitude + band_step * std::trunc(bands + std::copysign(1e-9, bands));
  if (std::abs(bands) < 1e-9) r.lands_on_band = altitude;
  return r;
}

// ---------------------------------------------------------------- quadrants

enum class Diagnosis { ok, non_horizontal_axis, eccentric_graduation, mixed };

inline const char* to_string(Diagnosis d) {
  switch (d) {
    case Diagnosis::ok: return "ok";
    case Diagnosis::non_horizontal_axis: return "non_horizontal_axis";
    case Diagnosis::eccentric_graduation: return "eccentric_graduation";
    case Diagnosis::mixed: return "mixed";
  }
  return "mixed";
}

struct ChordDiagnosis {
  std::array<double, 4> chords{};
  Diagnosis classification = Diagnosis::ok;
};

/// Compares the chords of the four quadrants bounded by `marks` (in order
/// around the circle). Equal opposite chords with unequal neighbours point
/// at a tilted horizontal line; four different chords point at an
/// eccentric graduation.
inline ChordDiagnosis quadrant_chord_diagnosis(const std::array<PlanePoint, 4>& marks, double tol) {
  ChordDiagnosis out;
  for (std::size_t i = 0; i < 4; ++i) out.chords[i] = distance(marks[i], marks[(i + 1) % 4]);
  const auto& c = out.chords;
  auto eq = [tol](double a, double b) { return std::abs(a - b) <= tol; };

  const bool opposite_equal = eq(c[0], c[2]) && eq(c[1], c[3]);
  bool all_equal = true;
  bool all_distinct = true;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) {
      all_equal = all_equal && eq(c[i], c[j]);
      all_distinct = all_distinct && !eq(c[i], c[j]);
    }
  if (all_equal)
    out.classification = Diagnosis::ok;
  else if (opposite_equal)
    out.classification = Diagnosis::non_horizontal_axis;
  else if (all_distinct)
    out.classification = Diagnosis::eccentric_graduation;
  else
    out.classification = Diagnosis::mixed;
  return out;
}

/// Marks given as angles (degrees) on `circle`.
inline ChordDiagnosis quadrant_chord_diagnosis(const Circle& circle,
                                               const std::array<double, 4>& angles_deg, double tol) {
  std::array<PlanePoint, 4> pts;
  for (std::size_t i = 0; i < 4; ++i) pts[i] = circle.point_at(deg_to_rad(angles_deg[i]));
  return quadrant_chord_diagnosis(pts, tol);
}

// ---------------------------------------------------------------- Monte Carlo

struct PerturbationSpec {
  double center_sigma = 0.0;      // mm
  double radius_sigma = 0.0;      // mm
  double graduation_sigma = 0.0;  // deg
  std::uint64_t seed = 1;

  void validate() const {
    if (center_sigma < 0.0 || radius_sigma < 0.0 || graduation_sigma < 0.0)
      throw ConfigError("perturbation sigmas must be >= 0");
  }
};

/// What the simulated observer reads off the perturbed plate.
enum class Scenario {
  time_to_sunset,  // hours, via the horizon and the limb
  altitude,        // degrees, altitude implied by the sun's plate position
};

inline const char* to_string(Scenario s) {
  return s == Scenario::time_to_sunset ? "time_to_sunset" : "altitude";
}

struct ErrorReport {
  double mean = 0.0;
  double std = 0.0;
  double max_abs = 0.0;
  std::size_t n_trials = 0;
  std::size_t n_rejected = 0;
  Diagnosis classification = Diagnosis::ok;
  double exact_value = 0.0;
  std::vector<double> errors;  // accepted trials, in trial order

  double fraction_at_least(double threshold) const {
    if (errors.empty()) return 0.0;
    const auto k = std::count_if(errors.begin(), errors.end(),
                                 [threshold](double e) { return std::abs(e) >= threshold; });
    return static_cast<double>(k) / static_cast<double>(errors.size());
  }

  friend bool operator==(const ErrorReport&, const ErrorReport&) = default;
};

namespace detail {

inline double altitude_of(double latitude, double dec, double hour_angle) {
  const double s = sin_deg(latitude) * sin_deg(dec) +
                   cos_deg(latitude) * cos_deg(dec) * cos_deg(hour_angle);
  return rad_to_deg(std::asin(std::clamp(s, -1.0, 1.0)));
}

inline std::optional<PlanePoint> nearest_hit(const Circle& a, const Circle& b, PlanePoint near) {
  const auto hits = circle_circle_intersection(a, b);
  if (hits.empty()) return std::nullopt;
  return *std::min_element(hits.begin(), hits.end(), [near](PlanePoint p, PlanePoint q) {
    return distance(p, near) < distance(q, near);
  });
}

inline double plate_angle(PlanePoint p) { return rad_to_deg(std::atan2(p.x, p.y)); }

}  // namespace detail

/// Simulates reading the plate with independently perturbed almucantar and
/// horizon circles. The observer knows the sun's true altitude, sets the
/// sun's declination circle on the (perturbed) almucantar, and reads the
/// hour angles of that point and of the (perturbed) horizon crossing off
/// the limb. Each trial draws from its own stream seeded by (seed, trial),
/// so results do not depend on `threads`.
inline ErrorReport monte_carlo_readout(const PlateConfig& cfg, const PerturbationSpec& pert,
                                       Scenario scenario, double sun_dec, double true_hour_angle,
                                       int n, int threads = 1) {
  cfg.validate();
  pert.validate();
  if (n < 1) throw ConfigError("Monte Carlo needs at least one trial");

  const double phi = cfg.latitude;
  const double ha = normalize_deg_signed(true_hour_angle);
  const double cos_h0 = -tan_deg(phi) * tan_deg(sun_dec);
  if (!(std::abs(cos_h0) < 1.0))
    throw ScenarioInfeasible("the sun does not set at this declination and latitude");
  const double h0 = rad_to_deg(std::acos(cos_h0));
  const double altitude = detail::altitude_of(phi, sun_dec, ha);
  if (!(altitude > 0.0) || std::abs(ha) >= h0)
    throw ScenarioInfeasible("the sun is below the horizon at the given hour angle");
  if (altitude >= 90.0 - 1e-9) throw ScenarioInfeasible("the sun is at the zenith");

  const double s = cfg.scale;
  const Circle dec_circle{{}, axis_projection_radius(sun_dec, ProjectionKind::stereographic(), s)};
  const Circle almucantar = almucantar_solution(phi, altitude, s).circle();
  const Circle horizon = horizon_circle(phi, s);
  const PlanePoint sun = project_point({sun_dec, normalize_deg(ha)}, s);
  const PlanePoint sunset = project_point({sun_dec, h0}, s);
  const double exact = scenario == Scenario::time_to_sunset ? (h0 - ha) / 15.0 : altitude;

  auto trial = [&](std::size_t index) -> std::optional<double> {
    std::seed_seq seq{static_cast<std::uint32_t>(pert.seed), static_cast<std::uint32_t>(pert.seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::array<double, 8> z{};
    for (auto& v : z) v = normal(rng);

    const Circle alm{{almucantar.center.x + pert.center_sigma * z[0],
                      almucantar.center.y + pert.center_sigma * z[1]},
                     almucantar.radius + pert.radius_sigma * z[2]};
    const Circle hor{{horizon.center.x + pert.center_sigma * z[3],
                      horizon.center.y + pert.center_sigma * z[4]},
                     horizon.radius + pert.radius_sigma * z[5]};
    if (!(alm.radius > 0.0) || !(hor.radius > 0.0)) return std::nullopt;

    const auto sun_read = detail::nearest_hit(dec_circle, alm, sun);
    if (!sun_read) return std::nullopt;
    const double ha_read = detail::plate_angle(*sun_read);
    if (scenario == Scenario::altitude) return detail::altitude_of(phi, sun_dec, ha_read) - altitude;

    const auto set_read = detail::nearest_hit(dec_circle, hor, sunset);
    if (!set_read) return std::nullopt;
    const double sun_limb = ha_read + pert.graduation_sigma * z[6];
    const double set_limb = detail::plate_angle(*set_read) + pert.graduation_sigma * z[7];
    const double read = normalize_deg_signed(set_limb - sun_limb) / 15.0;
    return read - exact;
  };

  const auto total = static_cast<std::size_t>(n);
  std::vector<std::optional<double>> results(total);
  std::size_t workers = threads <= 0 ? std::max(1u, std::thread::hardware_concurrency())
                                     : static_cast<std::size_t>(threads);
  workers = std::min(workers, total);
  if (workers <= 1) {
    for (std::size_t i = 0; i < total; ++i) results[i] = trial(i);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < total; i += workers) results[i] = trial(i);
      });
    }
  }

  ErrorReport report;
  report.n_trials = total;
  report.exact_value = exact;
  for (const auto& r : results) {
    if (r) report.errors.push_back(*r);
  }
  report.n_rejected = total - report.errors.size();
  if (report.errors.empty())
    throw ScenarioInfeasible("every trial's perturbed circles missed the sun's declination circle");

  double sum = 0.0;
  for (double e : report.errors) sum += e;
  report.mean = sum / static_cast<double>(report.errors.size());
  double sq = 0.0;
  for (double e : report.errors) {
    sq += (e - report.mean) * (e - report.mean);
    report.max_abs = std::max(report.max_abs, std::abs(e));
  }
  report.std = std::sqrt(sq / static_cast<double>(report.errors.size()));
  return report;
}

}  // namespace astrolabe::errors
