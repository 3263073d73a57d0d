#pragma once

#include <cmath>
#include <numbers>

namespace astrolabe {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

constexpr double deg_to_rad(double deg) noexcept { return deg * (pi / 180.0); }
constexpr double rad_to_deg(double rad) noexcept { return rad * (180.0 / pi); }

/// Wraps into [0, 2*pi).
inline double normalize_rad(double a) noexcept {
  double r = std::fmod(a, two_pi);
  if (r < 0.0) r += two_pi;
  if (r >= two_pi) r = 0.0;
  return r;
}

/// Wraps into [0, 360).
inline double normalize_deg(double a) noexcept {
  double r = std::fmod(a, 360.0);
  if (r < 0.0) r += 360.0;
  if (r >= 360.0) r = 0.0;
  return r;
}

/// Wraps into (-180, 180].
inline double normalize_deg_signed(double a) noexcept {
  double r = normalize_deg(a);
  return r > 180.0 ? r - 360.0 : r;
}

inline double sin_deg(double d) noexcept { return std::sin(deg_to_rad(d)); }
inline double cos_deg(double d) noexcept { return std::cos(deg_to_rad(d)); }
inline double tan_deg(double d) noexcept { return std::tan(deg_to_rad(d)); }

}  // namespace astrolabe
