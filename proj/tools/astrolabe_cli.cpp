// astrolabe: build instrument drawings and error analyses from the command line.
//
// Exit codes: 0 success, 1 invalid configuration or arguments, 2 mathematical
// domain error, 3 I/O failure.

#include <array>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "astrolabe/back.hpp"
#include "astrolabe/config.hpp"
#include "astrolabe/errors.hpp"
#include "astrolabe/plate.hpp"
#include "astrolabe/projection.hpp"
#include "astrolabe/render.hpp"
#include "astrolabe/rete.hpp"

namespace {

using namespace astrolabe;

enum ExitCode { exit_ok = 0, exit_config = 1, exit_domain = 2, exit_io = 3 };

/// Flags that mirror config-file keys. Values are kept as text and applied
/// through the same path as the file, after it, so flags win.
class ConfigFlags {
public:
  void add(CLI::App* app, const std::string& key, const std::string& help) {
    auto& b = bindings_.emplace_back(Binding{key, {}, nullptr});
    b.option = app->add_option("--" + key, b.value, help);
  }
  void add_switch(CLI::App* app, const std::string& flag, const std::string& key, bool value,
                  const std::string& help) {
    auto& s = switches_.emplace_back(Switch{key, value, nullptr});
    s.option = app->add_flag("--" + flag, help);
  }
  void add_config(CLI::App* app) {
    config_ = app->add_option("--config", config_path_,
                              "key = value file; command-line flags override its values");
  }

  RunConfig resolve() const {
    RunConfig cfg;
    if (config_ && config_->count() > 0) cfg = load_config(config_path_);
    for (const auto& b : bindings_) {
      if (b.option->count() > 0) apply_config_value(cfg, b.key, b.value, "<command line>", 0, 0);
    }
    for (const auto& s : switches_) {
      if (s.option->count() > 0) apply_config_value(cfg, s.key, s.value ? "true" : "false", "<command line>", 0, 0);
    }
    return cfg;
  }

private:
  struct Binding {
    std::string key;
    std::string value;
    CLI::Option* option;
  };
  struct Switch {
    std::string key;
    bool value;
    CLI::Option* option;
  };
  std::deque<Binding> bindings_;
  std::deque<Switch> switches_;
  CLI::Option* config_ = nullptr;
  std::string config_path_;
};

void add_scale_flags(ConfigFlags& f, CLI::App* app) {
  f.add(app, "scale-mm", "projected equator radius S in mm (default 100)");
  f.add(app, "diameter-mm", "plate diameter in mm; S = (d/2)/tan(45 + obliquity/2)");
  f.add(app, "obliquity", "obliquity of the ecliptic in degrees (default 23.44)");
}

void add_output_flags(ConfigFlags& f, CLI::App* app) {
  f.add(app, "out", "output SVG path (default: standard output)");
  f.add(app, "precision", "decimals in SVG coordinates, 1..9 (default 4)");
  f.add(app, "layers", "comma-separated layer ids to draw (default: all)");
  f.add(app, "seed", "random seed recorded for reproducible runs (default 1)");
  f.add_switch(app, "mirror-ew", "mirror-ew", true, "mirror the drawing east-west");
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path + "'");
}

void emit_svg(const InstrumentModel& model, const RunConfig& cfg) {
  std::vector<std::string> warnings;
  const std::string svg = render_svg(model, cfg.render_style(), &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  write_text(cfg.out, svg);
}

ReteModel make_rete(const RunConfig& cfg) {
  const auto catalog = cfg.catalog.empty() ? std::vector<StarEntry>{} : load_star_catalog(cfg.catalog);
  auto rete = build_rete(catalog, cfg.scale(), cfg.obliquity, cfg.sidereal_angle);
  for (const auto& s : rete.skipped) std::cerr << "skipped star: " << s.reason << "\n";
  return rete;
}

BackModel make_back(const RunConfig& cfg) {
  const auto localities = cfg.localities.empty() ? std::vector<Locality>{} : load_localities(cfg.localities);
  return build_back(cfg.back_config(), localities);
}

std::string fmt(double v, int decimals = 6) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::fixed << std::setprecision(decimals) << v;
  return os.str();
}

/// Prints `stat value` rows and optionally writes them as `stat,value` CSV.
void report(const std::vector<std::pair<std::string, std::string>>& rows, const std::string& csv_path) {
  std::size_t width = 4;
  for (const auto& r : rows) width = std::max(width, r.first.size());
  for (const auto& r : rows) std::cout << std::left << std::setw(static_cast<int>(width) + 2) << r.first << r.second << "\n";
  if (!csv_path.empty()) {
    std::string csv = "stat,value\n";
    for (const auto& r : rows) csv += r.first + "," + r.second + "\n";
    write_text(csv_path, csv);
  }
}

std::vector<double> parse_list(const std::string& text, std::size_t expected, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(what + ": '" + item + "' is not a number");
    }
  }
  if (out.size() != expected)
    throw ConfigError(what + " needs " + std::to_string(expected) + " comma-separated values");
  return out;
}

ProjectionKind projection_kind(const std::string& name, double q) {
  if (name == "stereographic") return ProjectionKind::stereographic();
  if (name == "gnomonic") return ProjectionKind::gnomonic();
  if (name == "orthographic") return ProjectionKind::orthographic();
  if (name == "external") return ProjectionKind::external(q);
  throw ConfigError("unknown projection kind '" + name + "'");
}

int run(int argc, char** argv) {
  CLI::App app{"Planispheric astrolabe geometry, drawings and error analysis"};
  app.require_subcommand(1);
  std::function<void()> action;

  // plate
  ConfigFlags plate_flags;
  auto* plate = app.add_subcommand("plate", "latitude plate: tropics, horizon, almucantars, azimuths, hours");
  plate_flags.add_config(plate);
  plate_flags.add(plate, "lat", "latitude in degrees, (0, 90) (default 40)");
  add_scale_flags(plate_flags, plate);
  plate_flags.add(plate, "almucantar-step", "altitude step between almucantars in degrees (default 5)");
  plate_flags.add(plate, "azimuth-step", "azimuth step in degrees (default 10)");
  plate_flags.add_switch(plate, "no-hour-lines", "hour-lines", false, "omit the unequal-hour lines");
  add_output_flags(plate_flags, plate);
  plate->callback([&] {
    action = [&] {
      const auto cfg = plate_flags.resolve();
      InstrumentModel m;
      m.plate = build_plate(cfg.plate_config());
      emit_svg(m, cfg);
    };
  });

  // rete
  ConfigFlags rete_flags;
  auto* rete = app.add_subcommand("rete", "rete: ecliptic with zodiac graduation and star pointers");
  rete_flags.add_config(rete);
  add_scale_flags(rete_flags, rete);
  rete_flags.add(rete, "catalog", "star CSV with header name,ra_deg,dec_deg,mag");
  rete_flags.add(rete, "sidereal-angle", "rete rotation as local sidereal angle in degrees (default 270)");
  add_output_flags(rete_flags, rete);
  rete->callback([&] {
    action = [&] {
      const auto cfg = rete_flags.resolve();
      InstrumentModel m;
      m.rete = make_rete(cfg);
      emit_svg(m, cfg);
    };
  });

  // back
  ConfigFlags back_flags;
  auto* back = app.add_subcommand("back", "back face: limb, sine quadrant, shadow square, calendar, midday and qibla curves");
  back_flags.add_config(back);
  back_flags.add(back, "lat", "latitude of the midday curve in degrees (default 40)");
  add_scale_flags(back_flags, back);
  back_flags.add(back, "localities", "localities CSV with header name,lat_deg,lon_deg for qibla marks");
  back_flags.add(back, "mecca-lat", "Mecca latitude in degrees (default 21.4225)");
  back_flags.add(back, "mecca-lon", "Mecca longitude in degrees east (default 39.8262)");
  add_output_flags(back_flags, back);
  back->callback([&] {
    action = [&] {
      const auto cfg = back_flags.resolve();
      InstrumentModel m;
      m.back = make_back(cfg);
      emit_svg(m, cfg);
    };
  });

  // full
  ConfigFlags full_flags;
  auto* full = app.add_subcommand("full", "plate, rete and back in one document");
  full_flags.add_config(full);
  full_flags.add(full, "lat", "latitude in degrees, (0, 90) (default 40)");
  add_scale_flags(full_flags, full);
  full_flags.add(full, "almucantar-step", "altitude step between almucantars in degrees (default 5)");
  full_flags.add(full, "azimuth-step", "azimuth step in degrees (default 10)");
  full_flags.add_switch(full, "no-hour-lines", "hour-lines", false, "omit the unequal-hour lines");
  full_flags.add(full, "catalog", "star CSV with header name,ra_deg,dec_deg,mag");
  full_flags.add(full, "sidereal-angle", "rete rotation as local sidereal angle in degrees (default 270)");
  full_flags.add(full, "localities", "localities CSV with header name,lat_deg,lon_deg for qibla marks");
  full_flags.add(full, "mecca-lat", "Mecca latitude in degrees (default 21.4225)");
  full_flags.add(full, "mecca-lon", "Mecca longitude in degrees east (default 39.8262)");
  add_output_flags(full_flags, full);
  full->callback([&] {
    action = [&] {
      const auto cfg = full_flags.resolve();
      InstrumentModel m;
      m.plate = build_plate(cfg.plate_config());
      m.rete = make_rete(cfg);
      m.back = make_back(cfg);
      emit_svg(m, cfg);
    };
  });

  // project
  ConfigFlags project_flags;
  double p_dec = 0.0, p_ha = 0.0, p_q = 2.0;
  std::string p_kind = "stereographic";
  auto* project = app.add_subcommand("project", "project one sphere point onto the plane");
  project_flags.add_config(project);
  project->add_option("--dec", p_dec, "declination in degrees")->required();
  project->add_option("--ha", p_ha, "hour angle in degrees (default 0)");
  project->add_option("--kind", p_kind, "stereographic, gnomonic, orthographic or external (default stereographic)");
  project->add_option("--q", p_q, "viewpoint distance in sphere radii for --kind external (default 2)");
  project_flags.add(project, "scale-mm", "projected equator radius S in mm (default 100)");
  project->callback([&] {
    action = [&] {
      const auto cfg = project_flags.resolve();
      const auto kind = projection_kind(p_kind, p_q);
      const auto sp = SpherePoint::make(p_dec, p_ha);
      const PlanePoint p = project_point(sp, cfg.scale(), kind);
      report({{"kind", kind.name()}, {"x_mm", fmt(p.x)}, {"y_mm", fmt(p.y)}, {"radius_mm", fmt(norm(p))}}, "");
    };
  });

  // qibla
  ConfigFlags qibla_flags;
  auto* qibla = app.add_subcommand("qibla", "qibla bearing: vector oracle beside the printed relation");
  qibla_flags.add_config(qibla);
  qibla_flags.add(qibla, "lat", "observer latitude in degrees");
  qibla_flags.add(qibla, "lon", "observer longitude in degrees east");
  qibla_flags.add(qibla, "localities", "localities CSV; one report block per row instead of --lat/--lon");
  qibla_flags.add(qibla, "mecca-lat", "Mecca latitude in degrees (default 21.4225)");
  qibla_flags.add(qibla, "mecca-lon", "Mecca longitude in degrees east (default 39.8262)");
  qibla->callback([&] {
    action = [&] {
      const auto cfg = qibla_flags.resolve();
      const auto mecca = Locality::make(cfg.mecca_lat, cfg.mecca_lon, "Mecca");
      std::vector<Locality> places = cfg.localities.empty()
                                         ? std::vector<Locality>{Locality::make(cfg.lat, cfg.lon, "observer")}
                                         : load_localities(cfg.localities);
      for (const auto& place : places) {
        const double oracle = bearing_oracle(place, mecca);
        const double printed = qibla_eq13(place, mecca);
        const double diff = std::abs(normalize_deg_signed(printed - oracle));
        std::cout << place.name << " (" << fmt(place.latitude, 4) << ", " << fmt(place.longitude, 4) << ")\n";
        report({{"great_circle_bearing_deg", fmt(oracle, 3)},
                {"printed_relation_deg", fmt(printed, 3)},
                {"difference_deg", fmt(diff, 3)}},
               "");
        if (diff > 1e-6)
          std::cout << "note: the printed relation diverges from the great-circle bearing by " << fmt(diff, 3)
                    << " deg; the great-circle value is the qibla direction\n";
      }
    };
  });

  // analyze
  auto* analyze = app.add_subcommand("analyze", "error analyses: arc-displacement, quadrant-chords, band, montecarlo");
  analyze->require_subcommand(1);
  std::string csv_path;

  ConfigFlags arc_flags;
  double a_p = 0.0, a_dalpha = 0.0, a_ds = 0.0, a_dp = 0.0;
  auto* arc = analyze->add_subcommand("arc-displacement", "displacement of a point on a mis-drawn arc");
  arc_flags.add_config(arc);
  arc->add_option("--p", a_p, "arc radius in mm (enables the angular form)");
  arc->add_option("--dalpha", a_dalpha, "angular error in radians (with --p)");
  arc->add_option("--ds", a_ds, "displacement along the arc in mm");
  arc->add_option("--dp", a_dp, "radius error in mm");
  arc->add_option("--csv", csv_path, "also write stat,value CSV to this path");
  arc->callback([&] {
    action = [&] {
      arc_flags.resolve();
      std::vector<std::pair<std::string, std::string>> rows;
      rows.push_back({"dL_linear_mm", fmt(errors::arc_displacement(a_ds, a_dp))});
      if (a_p > 0.0) rows.push_back({"dL_angular_mm", fmt(errors::arc_displacement_angular(a_p, a_dalpha, a_dp))});
      report(rows, csv_path);
    };
  });

  ConfigFlags chord_flags;
  std::string c_marks = "0,90,180,270";
  double c_radius = 100.0, c_ox = 0.0, c_oy = 0.0, c_tol = 1e-6;
  auto* chords = analyze->add_subcommand("quadrant-chords", "classify a graduation from its four quadrant chords");
  chord_flags.add_config(chords);
  chords->add_option("--marks", c_marks, "four boundary angles in degrees, comma-separated, seen from the rotation centre");
  chords->add_option("--radius", c_radius, "graduation circle radius in mm (default 100)");
  chords->add_option("--offset-x", c_ox, "graduation centre offset from the rotation centre, x in mm");
  chords->add_option("--offset-y", c_oy, "graduation centre offset from the rotation centre, y in mm");
  chords->add_option("--tol", c_tol, "chord equality tolerance in mm (default 1e-6)");
  chords->add_option("--csv", csv_path, "also write stat,value CSV to this path");
  chords->callback([&] {
    action = [&] {
      chord_flags.resolve();
      const auto angles = parse_list(c_marks, 4, "--marks");
      std::array<PlanePoint, 4> pts;
      for (std::size_t i = 0; i < 4; ++i) {
        // Ray from the rotation centre to the graduation circle.
        const PlanePoint dir{cos_deg(angles[i]), sin_deg(angles[i])};
        const double b = dir.x * c_ox + dir.y * c_oy;
        const double c = c_ox * c_ox + c_oy * c_oy - c_radius * c_radius;
        if (c >= 0.0) throw DomainError("rotation centre lies outside the graduation circle");
        pts[i] = (b + std::sqrt(b * b - c)) * dir;
      }
      const auto d = errors::quadrant_chord_diagnosis(pts, c_tol);
      report({{"chord_1_mm", fmt(d.chords[0])},
              {"chord_2_mm", fmt(d.chords[1])},
              {"chord_3_mm", fmt(d.chords[2])},
              {"chord_4_mm", fmt(d.chords[3])},
              {"classification", errors::to_string(d.classification)}},
             csv_path);
    };
  });

  ConfigFlags band_flags;
  double b_h = 0.0, b_fraction = 0.02, b_step = 3.0, b_horizon = 0.0;
  auto* band = analyze->add_subcommand("band", "which almucantar band a radius error lands on");
  band_flags.add_config(band);
  band_flags.add(band, "lat", "latitude in degrees (ignored with --horizon-radius)");
  add_scale_flags(band_flags, band);
  band->add_option("--horizon-radius", b_horizon, "derive the latitude from the horizon arc radius in mm");
  band->add_option("--altitude", b_h, "altitude of the mis-drawn almucantar in degrees (default 0)");
  band->add_option("--fraction", b_fraction, "radius error as a fraction of the arc radius (default 0.02)");
  band->add_option("--band-step", b_step, "almucantar spacing in degrees (default 3)");
  band->add_option("--csv", csv_path, "also write stat,value CSV to this path");
  band->callback([&] {
    action = [&] {
      auto cfg = band_flags.resolve();
      if (b_horizon > 0.0) {
        const double ratio = cfg.scale() / b_horizon;
        if (!(ratio < 1.0)) throw DomainError("horizon radius must exceed the equator radius");
        cfg.lat = rad_to_deg(std::asin(ratio));
      }
      PlateConfig pc;
      pc.latitude = cfg.lat;
      pc.scale = cfg.scale();
      pc.obliquity = cfg.obliquity;
      pc.validate();
      const auto r = errors::band_misassignment(pc, b_h, b_fraction, b_step);
      report({{"latitude_deg", fmt(pc.latitude, 4)},
              {"scale_mm", fmt(pc.scale, 4)},
              {"arc_radius_mm", fmt(almucantar_solution(pc.latitude, b_h, pc.scale).radius, 4)},
              {"band_spacing_mm", fmt(r.spacing, 4)},
              {"displacement_mm", fmt(r.displacement, 4)},
              {"displaced_altitude_deg", fmt(r.displaced_altitude, 4)},
              {"lands_on_band_deg", fmt(r.lands_on_band, 4)}},
             csv_path);
    };
  });

  ConfigFlags mc_flags;
  errors::PerturbationSpec pert;
  double m_dec = 0.0, m_ha = 45.0;
  int m_trials = 10000, m_threads = 1;
  std::string m_scenario = "time_to_sunset";
  auto* mc = analyze->add_subcommand("montecarlo", "Monte Carlo readout error from perturbed plate circles");
  mc_flags.add_config(mc);
  mc_flags.add(mc, "lat", "latitude in degrees (default 40)");
  add_scale_flags(mc_flags, mc);
  mc_flags.add(mc, "seed", "random seed (default 1)");
  mc->add_option("--center-sigma", pert.center_sigma, "std. dev. of circle centre errors in mm");
  mc->add_option("--radius-sigma", pert.radius_sigma, "std. dev. of circle radius errors in mm");
  mc->add_option("--graduation-sigma", pert.graduation_sigma, "std. dev. of limb reading errors in degrees");
  mc->add_option("--sun-dec", m_dec, "solar declination in degrees (default 0)");
  mc->add_option("--hour-angle", m_ha, "true hour angle of the sun in degrees (default 45)");
  mc->add_option("--trials", m_trials, "number of trials (default 10000)");
  mc->add_option("--threads", m_threads, "worker threads; results do not depend on it (default 1)");
  mc->add_option("--scenario", m_scenario, "time_to_sunset or altitude (default time_to_sunset)");
  mc->add_option("--csv", csv_path, "also write stat,value CSV to this path");
  mc->callback([&] {
    action = [&] {
      const auto cfg = mc_flags.resolve();
      pert.seed = cfg.seed;
      errors::Scenario scenario;
      if (m_scenario == "time_to_sunset") scenario = errors::Scenario::time_to_sunset;
      else if (m_scenario == "altitude") scenario = errors::Scenario::altitude;
      else throw ConfigError("unknown scenario '" + m_scenario + "'");
      PlateConfig pc;
      pc.latitude = cfg.lat;
      pc.scale = cfg.scale();
      pc.obliquity = cfg.obliquity;
      const auto r = errors::monte_carlo_readout(pc, pert, scenario, m_dec, m_ha, m_trials, m_threads);
      const std::string unit = scenario == errors::Scenario::time_to_sunset ? "h" : "deg";
      report({{"scenario", errors::to_string(scenario)},
              {"exact_" + unit, fmt(r.exact_value, 9)},
              {"mean_" + unit, fmt(r.mean, 9)},
              {"std_" + unit, fmt(r.std, 9)},
              {"max_abs_" + unit, fmt(r.max_abs, 9)},
              {"n_trials", std::to_string(r.n_trials)},
              {"n_rejected", std::to_string(r.n_rejected)},
              {"classification", errors::to_string(r.classification)}},
             csv_path);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  try {
    if (action) action();
  } catch (const AstrolabeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.category()) {
      case ErrorCategory::configuration: return exit_config;
      case ErrorCategory::domain: return exit_domain;
      case ErrorCategory::io: return exit_io;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_config;
  }
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
