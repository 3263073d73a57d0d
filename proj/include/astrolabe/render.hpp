#pragma once

// Deterministic SVG output. Every number goes through format_number
// (std::to_chars, fixed notation) so documents are byte-stable and
// locale-independent.

#include <algorithm>
#include <array>
#include <charconv>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "astrolabe/back.hpp"
#include "astrolabe/exceptions.hpp"
#include "astrolabe/geometry.hpp"
#include "astrolabe/plate.hpp"
#include "astrolabe/rete.hpp"

namespace astrolabe {

/// Layer ids in document order.
inline constexpr std::array<std::string_view, 13> layer_ids{
    "limb",     "tropics", "horizon",       "almucantars",   "azimuths", "hours", "ecliptic",
    "stars",    "calendar", "shadow-square", "sine-quadrant", "midday",   "qibla"};

struct RenderStyle {
  std::map<std::string, double, std::less<>> stroke_widths{
      {"limb", 0.35}, {"tropics", 0.3}, {"horizon", 0.3}, {"ecliptic", 0.3}};
  double default_stroke_width = 0.15;
  double label_font_size = 3.0;
  int precision = 4;
  bool mirror_ew = false;
  std::set<std::string, std::less<>> include_layers;  // empty: every layer

  double stroke_width(std::string_view layer) const {
    const auto it = stroke_widths.find(layer);
    return it == stroke_widths.end() ? default_stroke_width : it->second;
  }
  bool includes(std::string_view layer) const {
    return include_layers.empty() || include_layers.count(layer) > 0;
  }
  void validate() const {
    if (precision < 1 || precision > 9) throw ConfigError("precision must lie in [1, 9]");
    for (const auto& name : include_layers) {
      if (std::find(layer_ids.begin(), layer_ids.end(), name) == layer_ids.end())
        throw ConfigError("unknown layer '" + name + "'");
    }
  }
};

/// Any combination of the three faces; plate and rete share the front frame,
/// the back is drawn beside them.
struct InstrumentModel {
  std::optional<PlateModel> plate;
  std::optional<ReteModel> rete;
  std::optional<BackModel> back;
};

inline std::string format_number(double v, int precision) {
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                       std::chars_format::fixed, precision);
  if (ec != std::errc{}) throw DomainError("cannot format number for SVG output");
  std::string s(buf.data(), end);
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

/// Affine map from model millimetres to SVG user units.
struct SvgFrame {
  double sx = 1.0;
  double sy = 1.0;
  double dx = 0.0;
  double dy = 0.0;

  PlanePoint apply(PlanePoint p) const { return {sx * p.x + dx, sy * p.y + dy}; }
  bool reverses_orientation() const { return sx * sy < 0.0; }
};

/// `M x y A r r 0 large sweep x y` for an arc. SVG's sweep flag 1 runs
/// toward increasing angle in the output frame.
inline std::string arc_to_path(const Arc& arc, int precision, const SvgFrame& frame = {}) {
  const PlanePoint a = frame.apply(arc.start_point());
  const PlanePoint b = frame.apply(arc.end_point());
  const bool large = arc.sweep() > pi;
  const bool sweep = (arc.orientation() == Orientation::ccw) != frame.reverses_orientation();
  const std::string r = format_number(arc.circle().radius * std::abs(frame.sx), precision);
  return "M " + format_number(a.x, precision) + " " + format_number(a.y, precision) + " A " + r +
         " " + r + " 0 " + (large ? "1" : "0") + " " + (sweep ? "1" : "0") + " " +
         format_number(b.x, precision) + " " + format_number(b.y, precision);
}

namespace detail {

inline std::string xml_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

class SvgWriter {
public:
  SvgWriter(const RenderStyle& style, SvgFrame frame) : style_(style), frame_(frame) {}

  void set_frame(SvgFrame f) { frame_ = f; }
  std::string num(double v) const { return format_number(v, style_.precision); }

  void circle(const Circle& c) {
    const PlanePoint p = frame_.apply(c.center);
    body_ += "<circle cx=\"" + num(p.x) + "\" cy=\"" + num(p.y) + "\" r=\"" + num(c.radius) +
             "\"/>\n";
  }
  void marker(PlanePoint at, double r) {
    const PlanePoint p = frame_.apply(at);
    body_ += "<circle class=\"marker\" cx=\"" + num(p.x) + "\" cy=\"" + num(p.y) + "\" r=\"" +
             num(r) + "\"/>\n";
  }
  void arc(const Arc& a) { body_ += "<path d=\"" + arc_to_path(a, style_.precision, frame_) + "\"/>\n"; }
  void curve(const Curve& c) {
    if (const auto* circ = std::get_if<Circle>(&c))
      circle(*circ);
    else
      arc(std::get<Arc>(c));
  }
  void line(const Segment& s) {
    const PlanePoint a = frame_.apply(s.a);
    const PlanePoint b = frame_.apply(s.b);
    body_ += "<line x1=\"" + num(a.x) + "\" y1=\"" + num(a.y) + "\" x2=\"" + num(b.x) + "\" y2=\"" +
             num(b.y) + "\"/>\n";
  }
  void polyline(const std::vector<PlanePoint>& pts) {
    if (pts.size() < 2) return;
    std::string coords;
    for (const auto& q : pts) {
      const PlanePoint p = frame_.apply(q);
      coords += (coords.empty() ? "" : " ") + num(p.x) + "," + num(p.y);
    }
    body_ += "<polyline points=\"" + coords + "\"/>\n";
  }
  void text(PlanePoint at, std::string_view content) {
    const PlanePoint p = frame_.apply(at);
    body_ += "<text x=\"" + num(p.x) + "\" y=\"" + num(p.y) + "\" font-size=\"" +
             num(style_.label_font_size) + "\" text-anchor=\"middle\" stroke=\"none\" fill=\"black\">" +
             xml_escape(content) + "</text>\n";
  }

  bool empty() const { return body_.empty(); }
  std::string take() { return std::exchange(body_, {}); }

private:
  const RenderStyle& style_;
  SvgFrame frame_;
  std::string body_;
};

inline const std::array<const char*, 12> zodiac_signs{
    "Aries", "Taurus", "Gemini", "Cancer", "Leo", "Virgo",
    "Libra", "Scorpio", "Sagittarius", "Capricorn", "Aquarius", "Pisces"};

inline void emit_plate_layer(SvgWriter& w, std::string_view layer, const PlateModel& m) {
  if (layer == "limb") {
    w.circle(m.boundary);
  } else if (layer == "tropics") {
    w.circle(m.tropics.capricorn);
    w.circle(m.tropics.equator);
    w.circle(m.tropics.cancer);
  } else if (layer == "horizon") {
    for (const auto& c : m.horizon) w.curve(c);
  } else if (layer == "almucantars") {
    for (const auto& a : m.almucantars) {
      for (const auto& c : a.pieces) w.curve(c);
      if (a.marker) w.marker(*a.marker, 0.6);
      const long deg = std::lround(a.altitude);
      if (!a.marker && deg % 10 == 0) {
        const auto sol = almucantar_solution(m.config.latitude, a.altitude, m.config.scale);
        if (std::abs(sol.y_lower) < m.boundary.radius)
          w.text({1.5, sol.y_lower + 0.5}, std::to_string(deg));
      }
    }
  } else if (layer == "azimuths") {
    for (const auto& a : m.azimuths)
      for (const auto& c : a.pieces) w.curve(c);
    if (m.meridian) w.line(*m.meridian);
  } else if (layer == "hours") {
    for (const auto& h : m.hours) {
      if (const auto* arc = std::get_if<Arc>(&h.curve))
        w.arc(*arc);
      else
        w.line(std::get<Segment>(h.curve));
      const PlanePoint end = h.defining_points[2];
      w.text((1.04) * end, std::to_string(h.index));
    }
  }
}

inline void emit_rete_layer(SvgWriter& w, std::string_view layer, const ReteModel& m) {
  if (layer == "limb") {
    w.circle(m.boundary);
  } else if (layer == "ecliptic") {
    w.circle(m.ecliptic);
    for (const auto& t : m.zodiac_ticks) {
      const PlanePoint toward = m.ecliptic.center - t.point;
      const double len = (t.major ? 0.04 : 0.015) * m.scale;
      w.line({t.point, t.point + (len / norm(toward)) * toward});
    }
    for (std::size_t k = 0; k < zodiac_signs.size(); ++k) {
      const PlanePoint p = ecliptic_point(30.0 * static_cast<double>(k) + 15.0, m.scale, m.obliquity,
                                          m.sidereal_angle);
      const PlanePoint toward = m.ecliptic.center - p;
      w.text(p + ((0.06 * m.scale) / norm(toward)) * toward, zodiac_signs[k]);
    }
  } else if (layer == "stars") {
    for (const auto& s : m.pointers) {
      w.marker(s.point, 0.8);
      w.text(s.point + PlanePoint{0.0, 1.5}, s.star.name);
    }
  }
}

inline void emit_back_layer(SvgWriter& w, std::string_view layer, const BackModel& m) {
  if (layer == "limb") {
    w.circle(m.limb.outer);
    w.circle(m.limb.inner);
    for (const auto& t : m.limb.ticks) w.line(t);
    for (const auto& l : m.limb.labels) w.text(l.at, l.text);
  } else if (layer == "calendar") {
    w.circle(m.calendar.outer);
    w.circle(m.calendar.inner);
    for (const auto& t : m.calendar.ticks) w.line(t.tick);
    for (const auto& l : m.calendar.month_labels) w.text(l.at, l.text);
  } else if (layer == "shadow-square") {
    const double s = m.shadow.side;
    w.line({{0.0, 0.0}, {s, 0.0}});
    w.line({{s, 0.0}, {s, -s}});
    w.line({{s, -s}, {0.0, -s}});
    w.line({{0.0, -s}, {0.0, 0.0}});
    for (const auto& mk : m.shadow.recta) {
      w.line(mk.tick);
      if (mk.k % 3 == 0) w.text(mk.tick.b + PlanePoint{0.0, 2.0}, std::to_string(mk.k));
    }
    for (const auto& mk : m.shadow.versa) {
      w.line(mk.tick);
      if (mk.k % 3 == 0) w.text(mk.tick.b + PlanePoint{-2.5, 0.0}, std::to_string(mk.k));
    }
  } else if (layer == "sine-quadrant") {
    const double r = m.sine.radius;
    w.arc(Arc(Circle{{}, r}, pi / 2.0, pi, Orientation::ccw));
    w.line({{0.0, 0.0}, {-r, 0.0}});
    w.line({{0.0, 0.0}, {0.0, r}});
    for (const auto& s : m.sine.vertical) w.line(s);
    for (const auto& s : m.sine.horizontal) w.line(s);
  } else if (layer == "midday") {
    for (const auto& c : m.midday_curves) {
      w.arc(c.arc);
      w.text(c.control_points[1] + PlanePoint{0.0, 1.5}, format_number(c.latitude, 1));
    }
  } else if (layer == "qibla") {
    for (const auto& q : m.qibla_marks) {
      w.line(q.tick);
      w.text((1.1) * q.tick.a, q.locality.name);
    }
    for (const auto& c : m.qibla_curves) w.polyline(c.points);
  }
}

}  // namespace detail

inline bool is_empty(const InstrumentModel& m) { return !m.plate && !m.rete && !m.back; }

/// Renders every requested layer as `<g id="layer">`. When the selection
/// yields no geometry the document falls back to the boundary circle and
/// `warnings` (if given) receives an EmptyModel note.
inline std::string render_svg(const InstrumentModel& model, const RenderStyle& style,
                              std::vector<std::string>* warnings = nullptr) {
  style.validate();
  const double sx = style.mirror_ew ? -1.0 : 1.0;
  double front_r = 0.0;
  if (model.plate) front_r = std::max(front_r, model.plate->boundary.radius);
  if (model.rete) front_r = std::max(front_r, model.rete->boundary.radius);
  const double back_r = model.back ? model.back->boundary.radius * 1.05 : 0.0;
  const bool both = front_r > 0.0 && back_r > 0.0;
  const double back_dx = both ? front_r + back_r + 0.1 * std::max(front_r, back_r) : 0.0;

  const SvgFrame front{sx, -1.0, 0.0, 0.0};
  const SvgFrame back{sx, -1.0, back_dx, 0.0};

  const double half_h = std::max({front_r, back_r, 1.0});
  const double left = front_r > 0.0 ? -front_r : -back_r;
  const double right = both ? back_dx + back_r : (front_r > 0.0 ? front_r : back_r);
  const double margin = 0.05 * std::max(right - left, 2.0 * half_h);
  const double min_x = left - margin;
  const double width = (right - left) + 2.0 * margin;
  const double min_y = -half_h - margin;
  const double height = 2.0 * half_h + 2.0 * margin;

  auto emit = [&](detail::SvgWriter& w, std::string_view layer) {
    if (model.plate) {
      w.set_frame(front);
      detail::emit_plate_layer(w, layer, *model.plate);
    }
    if (model.rete) {
      w.set_frame(front);
      detail::emit_rete_layer(w, layer, *model.rete);
    }
    if (model.back) {
      w.set_frame(back);
      detail::emit_back_layer(w, layer, *model.back);
    }
  };

  std::string groups;
  bool geometry = false;
  for (auto layer : layer_ids) {
    if (!style.includes(layer)) continue;
    detail::SvgWriter w(style, front);
    emit(w, layer);
    if (w.empty()) continue;
    geometry = true;
    groups += "<g id=\"" + std::string(layer) + "\" fill=\"none\" stroke=\"black\" stroke-width=\"" +
              format_number(style.stroke_width(layer), style.precision) + "\">\n" + w.take() + "</g>\n";
  }
  if (!geometry) {
    if (warnings) warnings->push_back("EmptyModel: no geometry in the selected layers; emitting boundary only");
    detail::SvgWriter w(style, front);
    emit(w, "limb");
    groups = "<g id=\"limb\" fill=\"none\" stroke=\"black\" stroke-width=\"" +
             format_number(style.stroke_width("limb"), style.precision) + "\">\n" + w.take() + "</g>\n";
  }

  auto num = [&](double v) { return format_number(v, style.precision); };
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         num(width) + "mm\" height=\"" + num(height) + "mm\" viewBox=\"" + num(min_x) + " " +
         num(min_y) + " " + num(width) + " " + num(height) + "\">\n" + groups + "</svg>\n";
}

}  // namespace astrolabe
