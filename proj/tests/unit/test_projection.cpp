#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "astrolabe/projection.hpp"

using namespace astrolabe;

namespace {

/// Direct ray/plane oracle: viewpoint (0, 0, v), sphere point on the unit
/// sphere, plane z = w; returns the distance from the axis in sphere radii.
double ray_plane_radius(double dec_deg, double v, double w) {
  const double z = sin_deg(dec_deg);
  const double rho = cos_deg(dec_deg);
  const double t = (w - v) / (z - v);
  return t * rho;
}

}  // namespace

TEST(AxisRadius, StereographicExamples) {
  const auto st = ProjectionKind::stereographic();
  EXPECT_NEAR(axis_projection_radius(0.0, st, 100.0), 100.0, 1e-12);
  EXPECT_NEAR(axis_projection_radius(90.0, st, 100.0), 0.0, 1e-12);
  EXPECT_NEAR(axis_projection_radius(-23.44, st, 100.0), 152.35132, 1e-5);
  EXPECT_NEAR(axis_projection_radius(-23.44, st, 100.0), 152.4, 0.1);
  EXPECT_THROW(axis_projection_radius(-90.0, st, 100.0), DomainError);
}

TEST(AxisRadius, StereographicClosedForm) {
  const auto st = ProjectionKind::stereographic();
  for (double dec = -89.9; dec <= 90.0; dec += 0.1) {
    const double expected = 100.0 * tan_deg(45.0 - dec / 2.0);
    EXPECT_NEAR(axis_projection_radius(dec, st, 100.0), expected, 1e-12 * std::max(expected, 1.0)) << dec;
  }
}

TEST(AxisRadius, StereographicMonotone) {
  const auto st = ProjectionKind::stereographic();
  double prev = INFINITY;
  for (double dec = -89.9; dec <= 90.0; dec += 0.05) {
    const double r = axis_projection_radius(dec, st, 100.0);
    EXPECT_LT(r, prev) << dec;
    prev = r;
  }
}

TEST(AxisRadius, GnomonicMatchesRayOracle) {
  const auto g = ProjectionKind::gnomonic();
  for (double dec = 5.0; dec <= 90.0; dec += 5.0)
    EXPECT_NEAR(axis_projection_radius(dec, g, 100.0), 100.0 * ray_plane_radius(dec, 0.0, 1.0), 1e-9) << dec;
  EXPECT_NEAR(axis_projection_radius(45.0, g, 100.0), 100.0, 1e-12);
}

TEST(AxisRadius, GnomonicBehindViewpoint) {
  const auto g = ProjectionKind::gnomonic();
  EXPECT_THROW(axis_projection_radius(-23.44, g, 100.0), DomainError);
  EXPECT_THROW(axis_projection_radius(0.0, g, 100.0), DomainError);
}

TEST(AxisRadius, ExternalMatchesRayOracle) {
  const auto e = ProjectionKind::external(3.0);
  const double unit = 100.0 / ray_plane_radius(0.0, -3.0, 1.0);
  for (double dec = -80.0; dec <= 90.0; dec += 10.0)
    EXPECT_NEAR(axis_projection_radius(dec, e, 100.0), unit * ray_plane_radius(dec, -3.0, 1.0), 1e-9) << dec;
}

TEST(AxisRadius, ExternalConvergesToOrthographic) {
  const auto e = ProjectionKind::external(1e6);
  const auto o = ProjectionKind::orthographic();
  for (int dec = -89; dec <= 90; ++dec)
    EXPECT_NEAR(axis_projection_radius(dec, e, 100.0), axis_projection_radius(dec, o, 100.0), 1e-4 * 100.0) << dec;
}

TEST(ProjectionKind, Presets) {
  EXPECT_EQ(ProjectionKind::stereographic().viewpoint(), -1.0);
  EXPECT_EQ(ProjectionKind::stereographic().plane(), 1.0);
  EXPECT_EQ(ProjectionKind::gnomonic().viewpoint(), 0.0);
  EXPECT_EQ(ProjectionKind::external(2.5).viewpoint(), -2.5);
  EXPECT_TRUE(ProjectionKind::orthographic().is_orthographic());
  EXPECT_THROW(ProjectionKind::external(1.0), DomainError);
  EXPECT_THROW(ProjectionKind::custom(0.5, 0.5), DomainError);
  EXPECT_NO_THROW(ProjectionKind::custom(-0.5, 0.0));
}

TEST(ProjectPoint, Anchors) {
  const PlanePoint pole = project_point(SpherePoint::make(90.0, 123.0), 100.0);
  EXPECT_NEAR(pole.x, 0.0, 1e-12);
  EXPECT_NEAR(pole.y, 0.0, 1e-12);
  const PlanePoint a = project_point(SpherePoint::make(0.0, 0.0), 100.0);
  EXPECT_NEAR(a.x, 0.0, 1e-12);
  EXPECT_NEAR(a.y, 100.0, 1e-12);
  const PlanePoint b = project_point(SpherePoint::make(0.0, 90.0), 100.0);
  EXPECT_NEAR(b.x, 100.0, 1e-12);
  EXPECT_NEAR(b.y, 0.0, 1e-12);
}

TEST(SpherePoint, Validation) {
  EXPECT_THROW(SpherePoint::make(90.5, 0.0), DomainError);
  EXPECT_NEAR(SpherePoint::make(10.0, -90.0).hour_angle, 270.0, 1e-12);
  EXPECT_NEAR(SpherePoint::make(10.0, 720.0).hour_angle, 0.0, 1e-12);
}

TEST(Unproject, RoundTrip) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dec(-85.0, 90.0), ha(0.0, 360.0);
  for (int i = 0; i < 500; ++i) {
    const SpherePoint p{dec(rng), ha(rng)};
    const SpherePoint q = unproject_stereographic(project_point(p, 80.0), 80.0);
    EXPECT_NEAR(q.dec, p.dec, 1e-9);
    if (p.dec < 89.9) {
      EXPECT_NEAR(std::abs(normalize_deg_signed(q.hour_angle - p.hour_angle)), 0.0, 1e-9);
    }
  }
}

TEST(SampleSphereCircle, EquatorFromPole) {
  const auto pts = sample_sphere_circle({90.0, 0.0, 90.0}, 4);
  ASSERT_EQ(pts.size(), 4u);
  // Origin and direction are arbitrary; consecutive samples step 90 the same way.
  const double step = normalize_deg_signed(pts[1].hour_angle - pts[0].hour_angle);
  EXPECT_NEAR(std::abs(step), 90.0, 1e-9);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(pts[i].dec, 0.0, 1e-12);
    EXPECT_NEAR(normalize_deg_signed(pts[(i + 1) % 4].hour_angle - pts[i].hour_angle), step, 1e-9);
  }
}

TEST(SampleSphereCircle, EclipticSamples) {
  const double eps = 23.44;
  const SphereCircleSpec ecliptic{90.0 - eps, 0.0, 90.0};
  const auto pts = sample_sphere_circle(ecliptic, 72);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double t = 360.0 * static_cast<double>(i) / 72.0;
    // u runs through the equinox, so the parameter is the ecliptic longitude up to sign.
    EXPECT_NEAR(std::abs(sin_deg(pts[i].dec)), std::abs(sin_deg(eps) * sin_deg(t)), 1e-12);
  }
}

TEST(SampleSphereCircle, DistanceFromPole) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dec(-90.0, 90.0), ha(0.0, 360.0), rad(0.5, 90.0);
  for (int i = 0; i < 200; ++i) {
    const SphereCircleSpec spec{dec(rng), ha(rng), rad(rng)};
    for (const auto& p : sample_sphere_circle(spec, 17))
      EXPECT_NEAR(angular_distance(p, {spec.pole_dec, spec.pole_ha}), deg_to_rad(spec.angular_radius), 1e-12);
  }
  EXPECT_EQ(sample_sphere_circle({10.0, 20.0, 30.0}, 3).size(), 3u);
  EXPECT_THROW(sample_sphere_circle({10.0, 20.0, 30.0}, 2), DomainError);
}

TEST(CircleImage, Stereographic) {
  const SphereCircleSpec ecliptic{90.0 - 23.44, 0.0, 90.0};
  EXPECT_LT(circle_image_residual(ecliptic, ProjectionKind::stereographic(), 360, 100.0).rms_residual, 1e-9);
}

TEST(CircleImage, GnomonicEclipticNotProjectable) {
  const SphereCircleSpec ecliptic{90.0 - 23.44, 0.0, 90.0};
  EXPECT_THROW(circle_image_residual(ecliptic, ProjectionKind::gnomonic(), 360, 100.0), DomainError);
}

TEST(CircleImage, InclinedCirclesAreConicsUnderOtherKinds) {
  const SphereCircleSpec ecliptic{90.0 - 23.44, 0.0, 90.0};
  EXPECT_GT(circle_image_residual(ecliptic, ProjectionKind::orthographic(), 360, 100.0).rms_residual, 0.1);
  EXPECT_GT(circle_image_residual(ecliptic, ProjectionKind::external(3.0), 360, 100.0).rms_residual, 0.1);
  const SphereCircleSpec small{60.0, 0.0, 20.0};
  EXPECT_GT(circle_image_residual(small, ProjectionKind::gnomonic(), 360, 100.0).rms_residual, 0.1);
}

TEST(CircleImage, AxisymmetricCirclesAlwaysCircles) {
  const SphereCircleSpec equator{90.0, 0.0, 90.0};
  for (const auto& kind : {ProjectionKind::stereographic(), ProjectionKind::orthographic(),
                           ProjectionKind::external(2.0), ProjectionKind::external(50.0)})
    EXPECT_LT(circle_image_residual(equator, kind, 360, 100.0).rms_residual, 1e-9) << kind.name();
  const SphereCircleSpec polar_cap{90.0, 0.0, 30.0};
  EXPECT_LT(circle_image_residual(polar_cap, ProjectionKind::gnomonic(), 360, 100.0).rms_residual, 1e-9);
}

TEST(CircleImage, RandomCirclesPreserved) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(-1.0, 1.0), ha(0.0, 360.0), rad(1.0, 90.0);
  const SpherePoint south{-90.0, 0.0};
  int done = 0;
  while (done < 1000) {
    const SphereCircleSpec spec{rad_to_deg(std::asin(unit(rng))), ha(rng), rad(rng)};
    // Closest approach of the circle to the south pole.
    const double gap = std::abs(rad_to_deg(angular_distance({spec.pole_dec, spec.pole_ha}, south)) - spec.angular_radius);
    if (gap < 1.0) continue;
    EXPECT_LT(circle_image_residual(spec, ProjectionKind::stereographic(), 90, 100.0).rms_residual, 1e-9 * 100.0);
    ++done;
  }
}
