#pragma once

// Perspective projection of the celestial sphere from a viewpoint on the
// polar axis onto a plane perpendicular to it. The stereographic preset
// (viewpoint at the south pole) is the one every instrument face uses; the
// other presets exist to show what goes wrong elsewhere.

#include <cmath>
#include <string>
#include <vector>

#include "astrolabe/angles.hpp"
#include "astrolabe/exceptions.hpp"
#include "astrolabe/geometry.hpp"

namespace astrolabe {

/// Position on the celestial sphere, degrees. Hour angle grows westward.
struct SpherePoint {
  double dec = 0.0;
  double hour_angle = 0.0;

  static SpherePoint make(double dec_deg, double hour_angle_deg) {
    if (!(dec_deg >= -90.0 && dec_deg <= 90.0))
      throw DomainError("declination " + std::to_string(dec_deg) + " outside [-90, 90]");
    return {dec_deg, normalize_deg(hour_angle_deg)};
  }
};

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
};

inline double dot(Vec3 a, Vec3 b) noexcept { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(Vec3 a, Vec3 b) noexcept {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(Vec3 a) noexcept { return std::sqrt(dot(a, a)); }
inline Vec3 normalized(Vec3 a) noexcept { return (1.0 / norm(a)) * a; }

/// Unit vector with z toward the north celestial pole and (x, y) laid out
/// like the plate: hour angle 0 along +y, 90 along +x.
inline Vec3 to_vector(const SpherePoint& p) noexcept {
  const double cd = cos_deg(p.dec);
  return {cd * sin_deg(p.hour_angle), cd * cos_deg(p.hour_angle), sin_deg(p.dec)};
}

inline SpherePoint from_vector(Vec3 v) noexcept {
  const double dec = rad_to_deg(std::atan2(v.z, std::hypot(v.x, v.y)));
  return {dec, normalize_deg(rad_to_deg(std::atan2(v.x, v.y)))};
}

/// Great-circle separation in radians.
inline double angular_distance(const SpherePoint& a, const SpherePoint& b) noexcept {
  const Vec3 u = to_vector(a);
  const Vec3 v = to_vector(b);
  return std::atan2(norm(cross(u, v)), dot(u, v));
}

/// Viewpoint and image plane as signed heights on the polar axis, in sphere
/// radii. Orthographic is carried as an analytic flag, not a huge viewpoint.
class ProjectionKind {
public:
  static ProjectionKind stereographic() { return {-1.0, 1.0, false, "stereographic"}; }
  static ProjectionKind gnomonic() { return {0.0, 1.0, false, "gnomonic"}; }
  static ProjectionKind orthographic() { return {-INFINITY, 1.0, true, "orthographic"}; }
  static ProjectionKind external(double q) {
    if (!(q > 1.0)) throw DomainError("external projection needs q > 1");
    return {-q, 1.0, false, "external"};
  }
  static ProjectionKind custom(double viewpoint, double plane) {
    if (!std::isfinite(viewpoint) || !std::isfinite(plane) || viewpoint == plane)
      throw DomainError("projection plane must not contain the viewpoint");
    return {viewpoint, plane, false, "custom"};
  }

  double viewpoint() const noexcept { return viewpoint_; }
  double plane() const noexcept { return plane_; }
  bool is_orthographic() const noexcept { return orthographic_; }
  const std::string& name() const noexcept { return name_; }

private:
  ProjectionKind(double v, double w, bool ortho, std::string name)
      : viewpoint_(v), plane_(w), orthographic_(ortho), name_(std::move(name)) {}

  double viewpoint_;
  double plane_;
  bool orthographic_;
  std::string name_;
};

/// Distance from the axis of the image of a point at declination `dec_deg`,
/// scaled so the equator lands at `scale` (for the gnomonic viewpoint, whose
/// equator image is at infinity, one sphere radius maps to `scale`).
inline double axis_projection_radius(double dec_deg, const ProjectionKind& kind, double scale) {
  if (kind.is_orthographic()) return scale * cos_deg(dec_deg);

  const double v = kind.viewpoint();
  const double w = kind.plane();
  // sin(dec) - v, written to stay exact near the south pole when v = -1.
  const double c = cos_deg(45.0 - dec_deg / 2.0);
  const double denom = 2.0 * c * c - (1.0 + v);
  if (std::abs(denom) < 1e-12)
    throw DomainError("declination " + std::to_string(dec_deg) + " projects to infinity under " +
                      kind.name() + " projection");
  const double t = (w - v) / denom;
  if (t <= 0.0)
    throw DomainError("declination " + std::to_string(dec_deg) +
                      " is behind the viewpoint of the " + kind.name() + " projection");
  const double equator = v != 0.0 ? (w - v) / -v : 0.0;
  const double unit = equator > 0.0 ? scale / equator : scale;
  return unit * t * cos_deg(dec_deg);
}

inline PlanePoint project_point(const SpherePoint& p, double scale,
                                const ProjectionKind& kind = ProjectionKind::stereographic()) {
  if (kind.viewpoint() == -1.0 && p.dec <= -90.0)
    throw DomainError("the south celestial pole has no stereographic image");
  const double r = axis_projection_radius(p.dec, kind, scale);
  return {r * sin_deg(p.hour_angle), r * cos_deg(p.hour_angle)};
}

/// Inverse of the stereographic projection.
inline SpherePoint unproject_stereographic(PlanePoint q, double scale) noexcept {
  const double r = norm(q);
  const double dec = 90.0 - 2.0 * rad_to_deg(std::atan2(r, scale));
  return {dec, normalize_deg(rad_to_deg(std::atan2(q.x, q.y)))};
}

/// Small or great circle on the sphere, given by its pole and angular radius.
struct SphereCircleSpec {
  double pole_dec = 90.0;
  double pole_ha = 0.0;
  double angular_radius = 90.0;
};

inline std::vector<SpherePoint> sample_sphere_circle(const SphereCircleSpec& spec, int n) {
  if (n < 3) throw DomainError("sample_sphere_circle needs n >= 3");
  if (!(spec.angular_radius > 0.0 && spec.angular_radius <= 90.0))
    throw DomainError("angular radius must lie in (0, 90]");
  const Vec3 pole = to_vector({spec.pole_dec, spec.pole_ha});
  const Vec3 zhat{0.0, 0.0, 1.0};
  Vec3 u = cross(zhat, pole);
  u = norm(u) < 1e-12 ? Vec3{0.0, 1.0, 0.0} : normalized(u);
  const Vec3 v = cross(pole, u);

  const double cr = cos_deg(spec.angular_radius);
  const double sr = sin_deg(spec.angular_radius);
  std::vector<SpherePoint> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double t = two_pi * i / n;
    out.push_back(from_vector(cr * pole + sr * (std::cos(t) * u + std::sin(t) * v)));
  }
  return out;
}

/// Projects n samples of a sphere circle and reports how far the image is
/// from being a circle.
inline FitResult circle_image_residual(const SphereCircleSpec& spec, const ProjectionKind& kind,
                                       int n, double scale) {
  std::vector<PlanePoint> image;
  image.reserve(static_cast<std::size_t>(n));
  for (const auto& p : sample_sphere_circle(spec, n)) image.push_back(project_point(p, scale, kind));
  return fit_circle(image);
}

}  // namespace astrolabe
