#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "astrolabe/rete.hpp"

using namespace astrolabe;

TEST(Ecliptic, CircleFromTropics) {
  const Circle e = ecliptic_circle(100.0, 23.44);
  EXPECT_NEAR(e.center.x, 0.0, 1e-12);
  EXPECT_NEAR(e.center.y, 43.35678, 1e-5);
  EXPECT_NEAR(e.radius, 108.99454, 1e-5);
  EXPECT_NEAR(e.center.y, 43.4, 0.1);
  EXPECT_NEAR(e.radius, 109.0, 0.1);
  const double r_cap = capricorn_radius(100.0, 23.44);
  const double r_can = 100.0 * tan_deg(45.0 - 23.44 / 2.0);
  EXPECT_NEAR(e.signed_distance({0.0, r_cap}), 0.0, 1e-12);
  EXPECT_NEAR(e.signed_distance({0.0, -r_can}), 0.0, 1e-12);
}

TEST(Ecliptic, ZeroObliquityIsEquator) {
  const Circle e = ecliptic_circle(100.0, 0.0);
  EXPECT_NEAR(norm(e.center), 0.0, 1e-12);
  EXPECT_NEAR(e.radius, 100.0, 1e-12);
}

TEST(Ecliptic, MatchesProjectedSamples) {
  for (double sid : {270.0, 0.0, 123.4}) {
    const Circle e = ecliptic_circle(100.0, 23.44, sid);
    std::vector<PlanePoint> pts;
    for (int i = 0; i < 360; ++i) pts.push_back(ecliptic_point(i, 100.0, 23.44, sid));
    const auto fit = fit_circle(pts);
    EXPECT_LT(fit.rms_residual, 1e-9 * 100.0);
    EXPECT_NEAR(distance(fit.circle.center, e.center), 0.0, 1e-9 * 100.0) << sid;
    EXPECT_NEAR(fit.circle.radius, e.radius, 1e-9 * 100.0) << sid;
  }
}

TEST(EclipticPoint, Anchors) {
  // Longitude 0 lies on the equator circle, longitude 90 touches Cancer.
  const PlanePoint aries = ecliptic_point(0.0, 100.0, 23.44);
  EXPECT_NEAR(norm(aries), 100.0, 1e-9);
  const auto eq = ecliptic_to_equatorial(0.0, 23.44);
  EXPECT_NEAR(eq.ra, 0.0, 1e-12);
  EXPECT_NEAR(eq.dec, 0.0, 1e-12);
  const PlanePoint cancer = ecliptic_point(90.0, 100.0, 23.44);
  EXPECT_NEAR(norm(cancer), 100.0 * tan_deg(45.0 - 23.44 / 2.0), 1e-9);
  EXPECT_NEAR(cancer.x, 0.0, 1e-9);
  EXPECT_LT(cancer.y, 0.0);
  const PlanePoint capricorn = ecliptic_point(270.0, 100.0, 23.44);
  EXPECT_NEAR(capricorn.x, 0.0, 1e-9);
  EXPECT_NEAR(capricorn.y, capricorn_radius(100.0, 23.44), 1e-9);
}

TEST(EclipticPoint, OppositeLongitudesAcrossCentre) {
  for (int lon = 0; lon < 180; ++lon) {
    const PlanePoint a = ecliptic_point(lon, 100.0, 23.44);
    const PlanePoint b = ecliptic_point(lon + 180.0, 100.0, 23.44);
    const double diff = std::remainder(std::atan2(a.x, a.y) - std::atan2(b.x, b.y), two_pi);
    EXPECT_NEAR(std::abs(diff), pi, 1e-9) << lon;
  }
}

TEST(StarPointer, Examples) {
  EXPECT_NEAR(norm(star_pointer({"pole", 10.0, 90.0, 2.0}, 100.0, 23.44)), 0.0, 1e-12);
  const PlanePoint p = star_pointer({"eq", 0.0, 0.0, 1.0}, 100.0, 23.44, 0.0);
  EXPECT_NEAR(p.x, 0.0, 1e-12);
  EXPECT_NEAR(p.y, 100.0, 1e-12);
  EXPECT_THROW(star_pointer({"edge", 0.0, -23.44, 1.0}, 100.0, 23.44), OutsidePlate);
  EXPECT_THROW(star_pointer({"south", 0.0, -40.0, 1.0}, 100.0, 23.44), OutsidePlate);
  EXPECT_NO_THROW(star_pointer({"inside", 0.0, -23.4, 1.0}, 100.0, 23.44));
}

TEST(StarPointer, RoundTrip) {
  for (double sid : {270.0, 0.0, 45.5}) {
    for (double ra = 0.0; ra < 360.0; ra += 7.5) {
      for (double dec = -20.0; dec < 90.0; dec += 9.0) {
        const StarEntry s{"s", ra, dec, 0.0};
        const auto back = pointer_to_equatorial(star_pointer(s, 100.0, 23.44, sid), 100.0, sid);
        EXPECT_NEAR(back.dec, dec, 1e-9);
        EXPECT_NEAR(std::abs(normalize_deg_signed(back.ra - ra)), 0.0, 1e-9);
      }
    }
  }
}

TEST(BuildRete, EmptyCatalog) {
  const auto m = build_rete({}, 100.0, 23.44);
  EXPECT_TRUE(m.pointers.empty());
  EXPECT_TRUE(m.skipped.empty());
  ASSERT_EQ(m.zodiac_ticks.size(), 360u);
  int major = 0;
  for (std::size_t i = 0; i < m.zodiac_ticks.size(); ++i) {
    EXPECT_DOUBLE_EQ(m.zodiac_ticks[i].longitude, static_cast<double>(i));
    EXPECT_NEAR(m.ecliptic.signed_distance(m.zodiac_ticks[i].point), 0.0, 1e-9 * 100.0);
    major += m.zodiac_ticks[i].major;
  }
  EXPECT_EQ(major, 12);
}

TEST(BuildRete, SkipsStarsOutsidePlate) {
  const std::vector<StarEntry> catalog{{"Vega", 279.23, 38.78, 0.03},
                                       {"Sirius", 101.29, -16.72, -1.46},
                                       {"Arcturus", 213.92, 19.18, -0.05},
                                       {"Deep", 50.0, -40.0, 3.0},
                                       {"Polaris", 37.95, 89.26, 1.98}};
  const auto m = build_rete(catalog, 100.0, 23.44);
  EXPECT_EQ(m.pointers.size(), 4u);
  ASSERT_EQ(m.skipped.size(), 1u);
  EXPECT_EQ(m.skipped[0].star.name, "Deep");
  for (const auto& p : m.pointers) EXPECT_LT(norm(p.point), m.boundary.radius);
}

TEST(BuildRete, DuplicateNames) {
  const std::vector<StarEntry> catalog{{"A", 1.0, 1.0, 1.0}, {"A", 2.0, 2.0, 2.0}};
  EXPECT_THROW(build_rete(catalog, 100.0, 23.44), DuplicateStarName);
  EXPECT_THROW(build_rete({{"", 1.0, 1.0, 1.0}}, 100.0, 23.44), ConfigError);
  EXPECT_THROW(build_rete({{"x", 1.0, 91.0, 1.0}}, 100.0, 23.44), ConfigError);
}

TEST(Catalog, ParsesCsv) {
  std::istringstream in(
      "# bright stars\n"
      "name,ra_deg,dec_deg,mag\n"
      "Vega,279.23,38.78,0.03\n"
      "\n"
      "Altair,297.70,8.87,0.77\n");
  const auto stars = read_star_catalog(in, "test.csv");
  ASSERT_EQ(stars.size(), 2u);
  EXPECT_EQ(stars[1].name, "Altair");
  EXPECT_DOUBLE_EQ(stars[1].dec, 8.87);
}

TEST(Catalog, ReportsLineAndColumn) {
  std::istringstream in("name,ra_deg,dec_deg,mag\nVega,279.23,abc,0.03\n");
  try {
    read_star_catalog(in, "bad.csv");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_EQ(e.column(), 13);
  }
  std::istringstream header("name,ra,dec,mag\n");
  EXPECT_THROW(read_star_catalog(header, "h.csv"), ParseError);
  std::istringstream fields("name,ra_deg,dec_deg,mag\nVega,1,2\n");
  EXPECT_THROW(read_star_catalog(fields, "f.csv"), ParseError);
  std::istringstream dup("name,ra_deg,dec_deg,mag\nA,1,2,3\nA,4,5,6\n");
  EXPECT_THROW(read_star_catalog(dup, "d.csv"), DuplicateStarName);
  EXPECT_THROW(load_star_catalog("/nonexistent/stars.csv"), IoError);
}
