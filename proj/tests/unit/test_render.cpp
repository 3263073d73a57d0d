#include <regex>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "astrolabe/render.hpp"

using namespace astrolabe;

namespace {

InstrumentModel plate_model(double lat = 40.0) {
  PlateConfig c;
  c.latitude = lat;
  InstrumentModel m;
  m.plate = build_plate(c);
  return m;
}

int count(const std::string& text, const std::string& needle) {
  int n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

std::vector<double> attribute_values(const std::string& svg, const std::string& name) {
  std::vector<double> out;
  const std::regex re(" " + name + "=\"(-?[0-9.]+)\"");
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), re); it != std::sregex_iterator(); ++it)
    out.push_back(std::stod((*it)[1]));
  return out;
}

std::string group(const std::string& svg, const std::string& id) {
  const auto start = svg.find("<g id=\"" + id + "\"");
  if (start == std::string::npos) return {};
  return svg.substr(start, svg.find("</g>", start) - start);
}

}  // namespace

TEST(FormatNumber, FixedAndSignless) {
  EXPECT_EQ(format_number(1.0, 4), "1.0000");
  EXPECT_EQ(format_number(-0.0, 4), "0.0000");
  EXPECT_EQ(format_number(-0.00001, 4), "0.0000");
  EXPECT_EQ(format_number(-1.23456, 2), "-1.23");
  EXPECT_EQ(format_number(152.35132, 1), "152.4");
}

TEST(ArcPath, QuarterCircle) {
  const Arc a(Circle{{0, 0}, 1.0}, 0.0, pi / 2.0, Orientation::ccw);
  EXPECT_EQ(arc_to_path(a, 4), "M 1.0000 0.0000 A 1.0000 1.0000 0 0 1 0.0000 1.0000");
  const Arc b(Circle{{0, 0}, 1.0}, 0.0, pi / 2.0, Orientation::cw);
  EXPECT_EQ(arc_to_path(b, 4), "M 1.0000 0.0000 A 1.0000 1.0000 0 1 0 0.0000 1.0000");
}

TEST(ArcPath, SemicircleUsesSmallFlag) {
  const Arc a(Circle{{0, 0}, 2.0}, 0.0, pi, Orientation::ccw);
  EXPECT_EQ(arc_to_path(a, 3), "M 2.000 0.000 A 2.000 2.000 0 0 1 -2.000 0.000");
}

TEST(ArcPath, FlippedFrameReversesSweep) {
  const Arc a(Circle{{1, 1}, 1.0}, 0.0, pi / 2.0, Orientation::ccw);
  EXPECT_EQ(arc_to_path(a, 2, SvgFrame{1.0, -1.0, 0.0, 0.0}), "M 2.00 -1.00 A 1.00 1.00 0 0 0 1.00 -2.00");
}

TEST(ArcPath, EndpointsWithinPrecision) {
  const Arc a(Circle{{3.2, -7.7}, 12.345}, 0.3, 4.4, Orientation::cw);
  for (int precision = 1; precision <= 9; ++precision) {
    const std::string path = arc_to_path(a, precision);
    std::smatch m;
    ASSERT_TRUE(std::regex_match(path, m, std::regex("M (\\S+) (\\S+) A \\S+ \\S+ 0 [01] [01] (\\S+) (\\S+)")));
    const double tol = std::pow(10.0, -precision);
    EXPECT_NEAR(std::stod(m[1]), a.start_point().x, tol);
    EXPECT_NEAR(std::stod(m[2]), a.start_point().y, tol);
    EXPECT_NEAR(std::stod(m[3]), a.end_point().x, tol);
    EXPECT_NEAR(std::stod(m[4]), a.end_point().y, tol);
  }
}

TEST(RenderSvg, Deterministic) {
  const auto model = plate_model();
  EXPECT_EQ(render_svg(model, {}), render_svg(model, {}));
  EXPECT_EQ(render_svg(model, {}), render_svg(plate_model(), {}));
}

TEST(RenderSvg, LayerGroups) {
  const std::string svg = render_svg(plate_model(), {});
  for (const char* id : {"limb", "tropics", "horizon", "almucantars", "azimuths", "hours"})
    EXPECT_EQ(count(svg, std::string("<g id=\"") + id + "\""), 1) << id;
  EXPECT_EQ(count(svg, "<g "), 6);
}

TEST(RenderSvg, IncludeLayers) {
  RenderStyle style;
  style.include_layers = {"tropics"};
  const std::string svg = render_svg(plate_model(), style);
  EXPECT_EQ(count(svg, "<g "), 1);
  EXPECT_EQ(count(svg, "<g id=\"tropics\""), 1);
  // Unclipped circles stay circle elements.
  EXPECT_EQ(count(svg, "<circle"), 3);
  EXPECT_EQ(count(svg, "<path"), 0);
}

TEST(RenderSvg, UnknownLayerRejected) {
  RenderStyle style;
  style.include_layers = {"tropic"};
  EXPECT_THROW(render_svg(plate_model(), style), ConfigError);
  style = RenderStyle{};
  style.precision = 0;
  EXPECT_THROW(render_svg(plate_model(), style), ConfigError);
  style.precision = 10;
  EXPECT_THROW(render_svg(plate_model(), style), ConfigError);
}

TEST(RenderSvg, Precision) {
  RenderStyle style;
  style.precision = 2;
  const std::string svg = render_svg(plate_model(), style);
  EXPECT_NE(svg.find("r=\"152.35\""), std::string::npos);
  for (double precision_check : attribute_values(svg, "cx")) (void)precision_check;
  EXPECT_TRUE(std::regex_search(svg, std::regex("cx=\"-?[0-9]+\\.[0-9]{2}\"")));
  EXPECT_FALSE(std::regex_search(svg, std::regex("=\"-?[0-9]+\\.[0-9]{3,}\"")));
}

TEST(RenderSvg, MirrorNegatesX) {
  RenderStyle style;
  style.include_layers = {"hours", "azimuths"};
  const std::string plain = render_svg(plate_model(), style);
  style.mirror_ew = true;
  const std::string mirrored = render_svg(plate_model(), style);
  for (const char* attr : {"x1", "x2", "x"}) {
    const auto a = attribute_values(plain, attr);
    const auto b = attribute_values(mirrored, attr);
    ASSERT_EQ(a.size(), b.size());
    ASSERT_FALSE(a.empty());
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_DOUBLE_EQ(a[i], -b[i]) << attr;
  }
  for (const char* attr : {"y1", "y2", "y"}) EXPECT_EQ(attribute_values(plain, attr), attribute_values(mirrored, attr));
  const std::regex path("M (\\S+) (\\S+) A (\\S+) \\S+ 0 ([01]) ([01]) (\\S+) (\\S+)");
  auto pa = std::sregex_iterator(plain.begin(), plain.end(), path);
  auto pb = std::sregex_iterator(mirrored.begin(), mirrored.end(), path);
  int paths = 0;
  for (; pa != std::sregex_iterator() && pb != std::sregex_iterator(); ++pa, ++pb, ++paths) {
    EXPECT_DOUBLE_EQ(std::stod((*pa)[1]), -std::stod((*pb)[1]));
    EXPECT_EQ((*pa)[2], (*pb)[2]);
    EXPECT_EQ((*pa)[4], (*pb)[4]);
    EXPECT_NE((*pa)[5], (*pb)[5]);
    EXPECT_DOUBLE_EQ(std::stod((*pa)[6]), -std::stod((*pb)[6]));
  }
  EXPECT_GT(paths, 10);
}

TEST(RenderSvg, YAxisPointsUp) {
  RenderStyle style;
  style.include_layers = {"almucantars"};
  const std::string svg = render_svg(plate_model(), style);
  // The zenith marker sits above the centre, so its SVG y is negative.
  std::smatch m;
  ASSERT_TRUE(std::regex_search(svg, m, std::regex("class=\"marker\" cx=\"(\\S+)\" cy=\"(\\S+)\"")));
  EXPECT_EQ(m[1].str(), "0.0000");
  EXPECT_EQ(m[2].str(), "-46.6308");
}

TEST(RenderSvg, ViewBoxMargin) {
  const std::string svg = render_svg(plate_model(), {});
  EXPECT_NE(svg.find("viewBox=\"-167.5864 -167.5864 335.1729 335.1729\""), std::string::npos);
}

TEST(RenderSvg, EmptyModelWarns) {
  std::vector<std::string> warnings;
  InstrumentModel empty;
  const std::string svg = render_svg(empty, {}, &warnings);
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("EmptyModel"), std::string::npos);
  EXPECT_NE(svg.find("<svg"), std::string::npos);

  RenderStyle style;
  style.include_layers = {"calendar"};
  warnings.clear();
  const std::string fallback = render_svg(plate_model(), style, &warnings);
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_EQ(count(fallback, "<g id=\"limb\""), 1);
  EXPECT_EQ(count(fallback, "<circle"), 1);
}

TEST(RenderSvg, Completeness) {
  const auto model = plate_model();
  const auto& p = *model.plate;
  const std::string svg = render_svg(model, {});
  std::size_t horizon = p.horizon.size();
  EXPECT_EQ(static_cast<std::size_t>(count(group(svg, "horizon"), "<path") + count(group(svg, "horizon"), "<circle")),
            horizon);
  std::size_t alm = 0;
  for (const auto& a : p.almucantars) alm += a.pieces.size() + (a.marker ? 1 : 0);
  const std::string ga = group(svg, "almucantars");
  EXPECT_EQ(static_cast<std::size_t>(count(ga, "<path") + count(ga, "<circle")), alm);
  std::size_t az = p.meridian ? 1 : 0;
  for (const auto& a : p.azimuths) az += a.pieces.size();
  const std::string gz = group(svg, "azimuths");
  EXPECT_EQ(static_cast<std::size_t>(count(gz, "<path") + count(gz, "<circle") + count(gz, "<line")), az);
  const std::string gh = group(svg, "hours");
  EXPECT_EQ(static_cast<std::size_t>(count(gh, "<path") + count(gh, "<line")), p.hours.size());
}

TEST(RenderSvg, FullInstrument) {
  InstrumentModel m = plate_model();
  m.rete = build_rete({{"Vega", 279.23, 38.78, 0.03}}, 100.0, 23.44);
  BackConfig bc;
  bc.limb_radius = capricorn_radius(100.0, 23.44);
  m.back = build_back(bc, {Locality::make(33.51, 36.29, "Damascus")});
  const std::string svg = render_svg(m, {});
  for (auto id : layer_ids) EXPECT_EQ(count(svg, "<g id=\"" + std::string(id) + "\""), 1) << id;
  EXPECT_NE(svg.find(">Vega</text>"), std::string::npos);
  EXPECT_NE(svg.find(">Damascus</text>"), std::string::npos);
}
