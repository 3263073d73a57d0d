#pragma once

// Planar primitives (millimetres, radians) and the constructions built on
// them: circumcircles, least-squares circle fits, equal arc division,
// circle intersections and disc clipping.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "astrolabe/angles.hpp"
#include "astrolabe/exceptions.hpp"

namespace astrolabe {

struct PlanePoint {
  double x = 0.0;
  double y = 0.0;

  friend PlanePoint operator+(PlanePoint a, PlanePoint b) { return {a.x + b.x, a.y + b.y}; }
  friend PlanePoint operator-(PlanePoint a, PlanePoint b) { return {a.x - b.x, a.y - b.y}; }
  friend PlanePoint operator*(double s, PlanePoint a) { return {s * a.x, s * a.y}; }
  friend bool operator==(PlanePoint, PlanePoint) = default;
};

inline double norm(PlanePoint p) noexcept { return std::hypot(p.x, p.y); }
inline double distance(PlanePoint a, PlanePoint b) noexcept { return norm(a - b); }
inline double cross(PlanePoint a, PlanePoint b) noexcept { return a.x * b.y - a.y * b.x; }
inline bool is_finite(PlanePoint p) noexcept { return std::isfinite(p.x) && std::isfinite(p.y); }

struct Circle {
  PlanePoint center;
  double radius = 0.0;

  PlanePoint point_at(double theta) const noexcept {
    return {center.x + radius * std::cos(theta), center.y + radius * std::sin(theta)};
  }
  /// Polar angle of `p` about the centre, in [0, 2*pi).
  double angle_of(PlanePoint p) const noexcept {
    return normalize_rad(std::atan2(p.y - center.y, p.x - center.x));
  }
  /// Signed distance of `p` from the circumference (negative inside).
  double signed_distance(PlanePoint p) const noexcept { return distance(p, center) - radius; }
};

enum class Orientation { ccw, cw };

/// Circular arc. Angles are normalised to [0, 2*pi) and never coincide.
class Arc {
public:
  Arc(Circle circle, double start_angle, double end_angle, Orientation orientation)
      : circle_(circle),
        start_(normalize_rad(start_angle)),
        end_(normalize_rad(end_angle)),
        orientation_(orientation) {
    if (!(circle.radius > 0.0)) throw DomainError("arc radius must be positive");
    double gap = std::abs(start_ - end_);
    if (gap < 1e-15 || std::abs(gap - two_pi) < 1e-15)
      throw DomainError("arc start and end angles coincide");
  }

  const Circle& circle() const noexcept { return circle_; }
  double start_angle() const noexcept { return start_; }
  double end_angle() const noexcept { return end_; }
  Orientation orientation() const noexcept { return orientation_; }

  /// Angular extent in (0, 2*pi).
  double sweep() const noexcept {
    return orientation_ == Orientation::ccw ? normalize_rad(end_ - start_)
                                            : normalize_rad(start_ - end_);
  }
  /// Angle reached after travelling fraction t of the sweep.
  double angle_at(double t) const noexcept {
    double s = (orientation_ == Orientation::ccw ? 1.0 : -1.0) * sweep() * t;
    return start_ + s;
  }
  PlanePoint point_at(double t) const noexcept { return circle_.point_at(angle_at(t)); }
  PlanePoint start_point() const noexcept { return circle_.point_at(start_); }
  PlanePoint end_point() const noexcept { return circle_.point_at(end_); }

  bool contains_angle(double theta) const noexcept {
    double off = orientation_ == Orientation::ccw ? normalize_rad(theta - start_)
                                                  : normalize_rad(start_ - theta);
    return off <= sweep();
  }

private:
  Circle circle_;
  double start_;
  double end_;
  Orientation orientation_;
};

struct Segment {
  PlanePoint a;
  PlanePoint b;
};

/// A clipped circle: either the whole circle survives or an arc of it.
using Curve = std::variant<Circle, Arc>;

struct FitResult {
  Circle circle;
  double rms_residual = 0.0;
  double max_residual = 0.0;
};

namespace detail {

inline double max_pairwise_distance(PlanePoint a, PlanePoint b, PlanePoint c) {
  return std::max({distance(a, b), distance(b, c), distance(a, c)});
}

inline FitResult with_residuals(const Circle& c, std::span<const PlanePoint> pts) {
  double sum_sq = 0.0;
  double worst = 0.0;
  for (const auto& p : pts) {
    double r = std::abs(c.signed_distance(p));
    sum_sq += r * r;
    worst = std::max(worst, r);
  }
  double rms = std::sqrt(sum_sq / static_cast<double>(pts.size()));
  return {c, std::min(rms, worst), worst};
}

}  // namespace detail

/// Circle through three points. Rejects triangles whose area falls below
/// 1e-12 times the squared longest side.
inline Circle circumcircle(PlanePoint p1, PlanePoint p2, PlanePoint p3) {
  const PlanePoint b = p2 - p1;
  const PlanePoint c = p3 - p1;
  const double d = 2.0 * cross(b, c);
  const double dmax = detail::max_pairwise_distance(p1, p2, p3);
  if (!(std::abs(d) / 4.0 >= 1e-12 * dmax * dmax) || dmax == 0.0)
    throw CollinearPoints("circumcircle: points are collinear or coincident");
  const double b2 = b.x * b.x + b.y * b.y;
  const double c2 = c.x * c.x + c.y * c.y;
  const PlanePoint u{(c.y * b2 - b.y * c2) / d, (b.x * c2 - c.x * b2) / d};
  return {p1 + u, norm(u)};
}

/// Arc on the circumcircle running from p1 through p2 to p3.
inline Arc arc_through(PlanePoint p1, PlanePoint p2, PlanePoint p3) {
  const Circle c = circumcircle(p1, p2, p3);
  const double a1 = c.angle_of(p1);
  const double a2 = c.angle_of(p2);
  const double a3 = c.angle_of(p3);
  const bool ccw = normalize_rad(a2 - a1) < normalize_rad(a3 - a1);
  return Arc(c, a1, a3, ccw ? Orientation::ccw : Orientation::cw);
}

/// Algebraic (Kasa) least-squares circle followed by one geometric
/// Gauss-Newton step. Three points reduce to the circumcircle.
inline FitResult fit_circle(std::span<const PlanePoint> points) {
  const auto n = static_cast<Eigen::Index>(points.size());
  if (n < 3) throw TooFewPoints("fit_circle needs at least 3 points");
  if (n == 3) return detail::with_residuals(circumcircle(points[0], points[1], points[2]), points);

  PlanePoint mean{};
  for (const auto& p : points) mean = mean + p;
  mean = (1.0 / static_cast<double>(n)) * mean;

  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  for (const auto& p : points) {
    Eigen::Vector2d d(p.x - mean.x, p.y - mean.y);
    cov += d * d.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(cov);
  const double lmax = eig.eigenvalues()(1);
  if (!(lmax > 0.0) || eig.eigenvalues()(0) <= 1e-24 * lmax)
    throw CollinearPoints("fit_circle: points are collinear");

  // Centred Kasa system: u^2 + v^2 + D u + E v + F = 0.
  Eigen::MatrixX3d a(n, 3);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double u = points[static_cast<std::size_t>(i)].x - mean.x;
    const double v = points[static_cast<std::size_t>(i)].y - mean.y;
    a(i, 0) = u;
    a(i, 1) = v;
    a(i, 2) = 1.0;
    b(i) = -(u * u + v * v);
  }
  const Eigen::Vector3d def = a.colPivHouseholderQr().solve(b);
  double cx = -def(0) / 2.0;
  double cy = -def(1) / 2.0;
  const double r2 = cx * cx + cy * cy - def(2);
  if (!(r2 > 0.0) || !std::isfinite(r2)) throw CollinearPoints("fit_circle: degenerate algebraic fit");
  double r = std::sqrt(r2);

  // Geometric refinement on residuals |p - c| - r.
  Eigen::MatrixX3d jac(n, 3);
  Eigen::VectorXd res(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double u = points[static_cast<std::size_t>(i)].x - mean.x - cx;
    const double v = points[static_cast<std::size_t>(i)].y - mean.y - cy;
    const double d = std::hypot(u, v);
    if (d == 0.0) throw CollinearPoints("fit_circle: sample coincides with fitted centre");
    jac(i, 0) = -u / d;
    jac(i, 1) = -v / d;
    jac(i, 2) = -1.0;
    res(i) = d - r;
  }
  const Eigen::Vector3d step = jac.colPivHouseholderQr().solve(-res);
  if (step.allFinite()) {
    cx += step(0);
    cy += step(1);
    r += step(2);
  }
  return detail::with_residuals(Circle{{cx + mean.x, cy + mean.y}, r}, points);
}

inline FitResult fit_circle(const std::vector<PlanePoint>& points) {
  return fit_circle(std::span<const PlanePoint>(points));
}

/// n+1 points splitting the arc into n equal central angles, endpoints included.
inline std::vector<PlanePoint> divide_arc_equal(const Arc& arc, int n) {
  if (n < 1) throw DomainError("divide_arc_equal: n must be >= 1");
  std::vector<PlanePoint> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) {
    out.push_back(arc.point_at(static_cast<double>(i) / static_cast<double>(n)));
  }
  return out;
}

inline double chord_length(const Circle& c, double theta1, double theta2) noexcept {
  return 2.0 * c.radius * std::abs(std::sin((theta2 - theta1) / 2.0));
}

/// Zero, one (tangency) or two intersection points.
inline std::vector<PlanePoint> circle_circle_intersection(const Circle& a, const Circle& b) {
  const PlanePoint delta = b.center - a.center;
  const double d = norm(delta);
  const double scale = std::max({a.radius, b.radius, 1.0});
  const double tol = 1e-12 * scale;
  if (d <= tol) {
    if (std::abs(a.radius - b.radius) <= tol)
      throw CoincidentCircles("circle_circle_intersection: circles coincide");
    return {};
  }
  const double outer = a.radius + b.radius;
  const double inner = std::abs(a.radius - b.radius);
  if (d > outer + tol || d < inner - tol) return {};

  const PlanePoint ux = (1.0 / d) * delta;
  const PlanePoint uy{-ux.y, ux.x};
  const double along = (d * d + a.radius * a.radius - b.radius * b.radius) / (2.0 * d);
  const double h2 = a.radius * a.radius - along * along;
  const PlanePoint foot = a.center + along * ux;
  if (std::abs(d - outer) <= tol || std::abs(d - inner) <= tol || h2 <= 0.0) return {foot};
  const double h = std::sqrt(h2);
  return {foot + h * uy, foot - h * uy};
}

/// Constraint used when clipping: keep the part of a circle inside (or
/// outside) `boundary`.
struct ClipRegion {
  Circle boundary;
  bool keep_inside = true;

  bool admits(PlanePoint p) const noexcept {
    double sd = boundary.signed_distance(p);
    return keep_inside ? sd <= 0.0 : sd >= 0.0;
  }
};

/// Portions of `c` satisfying every region, as ccw arcs (or the whole
/// circle). Arcs entirely rejected are dropped.
inline std::vector<Curve> clip_circle(const Circle& c, std::span<const ClipRegion> regions) {
  std::vector<double> cuts;
  for (const auto& region : regions) {
    std::vector<PlanePoint> hits;
    try {
      hits = circle_circle_intersection(c, region.boundary);
    } catch (const CoincidentCircles&) {
      continue;
    }
    for (const auto& p : hits) cuts.push_back(c.angle_of(p));
  }
  auto admitted = [&](double theta) {
    const PlanePoint p = c.point_at(theta);
    return std::all_of(regions.begin(), regions.end(),
                       [&](const ClipRegion& r) { return r.admits(p); });
  };

  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double x, double y) { return std::abs(x - y) < 1e-13; }),
             cuts.end());
  if (cuts.size() < 2) {
    if (admitted(cuts.empty() ? 0.0 : cuts.front() + pi)) return {c};
    return {};
  }

  const std::size_t m = cuts.size();
  std::vector<bool> keep(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double a0 = cuts[i];
    const double a1 = i + 1 < m ? cuts[i + 1] : cuts[0] + two_pi;
    keep[i] = admitted((a0 + a1) / 2.0);
  }
  if (std::all_of(keep.begin(), keep.end(), [](bool k) { return k; })) return {c};

  // Start at an interval following a rejected one so merged runs never wrap.
  std::size_t first = 0;
  while (!(keep[first] && !keep[(first + m - 1) % m])) ++first;
  std::vector<Curve> out;
  std::size_t i = 0;
  while (i < m) {
    const std::size_t idx = (first + i) % m;
    if (!keep[idx]) {
      ++i;
      continue;
    }
    const double start = cuts[idx];
    std::size_t j = i;
    while (j + 1 < m && keep[(first + j + 1) % m]) ++j;
    const std::size_t last = (first + j) % m;
    const double end = last + 1 < m ? cuts[last + 1] : cuts[0];
    out.emplace_back(Arc(c, start, end, Orientation::ccw));
    i = j + 1;
  }
  return out;
}

inline std::vector<Curve> clip_circle(const Circle& c, std::initializer_list<ClipRegion> regions) {
  return clip_circle(c, std::span<const ClipRegion>(regions.begin(), regions.size()));
}

/// Evenly spaced sample points along a curve, endpoints included for arcs.
inline std::vector<PlanePoint> sample_curve(const Curve& curve, int n) {
  std::vector<PlanePoint> out;
  if (const auto* circle = std::get_if<Circle>(&curve)) {
    for (int i = 0; i < n; ++i) out.push_back(circle->point_at(two_pi * i / n));
  } else {
    const auto& arc = std::get<Arc>(curve);
    for (int i = 0; i <= n; ++i) out.push_back(arc.point_at(static_cast<double>(i) / n));
  }
  return out;
}

}  // namespace astrolabe
