#include "urbscale_app/commands.hpp"

#include <spdlog/spdlog.h>

#include <fstream>
#include <ostream>
#include <sstream>

#include "urbscale/error.hpp"
#include "urbscale/numfmt.hpp"
#include "urbscale/render.hpp"
#include "urbscale/scenario.hpp"
#include "urbscale/serialize.hpp"
#include "urbscale/spectrum.hpp"

namespace urbscale::app {

namespace fs = std::filesystem;

namespace {

void write_output(const RunConfig& config, const std::string& name, const std::string& content) {
  std::error_code ec;
  fs::create_directories(config.out, ec);
  const fs::path path = config.out / name;
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f || !f.write(content.data(), static_cast<std::streamsize>(content.size()))) {
    throw AppError(kExitInput, "cannot write " + path.string());
  }
  spdlog::info("wrote {}", path.string());
}

void require_out(const RunConfig& config) {
  if (config.out.empty()) throw AppError(kExitInput, "--out is required");
}

Json json_opt(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

// CSV fields here are ids and codes; quote only when needed.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

const CityRecord& require_city(const Workspace& ws, const std::string& id) {
  if (id.empty()) throw AppError(kExitInput, "--city is required");
  const auto* rec = ws.find(id);
  if (!rec) throw AppError(kExitInput, "unknown city '" + id + "'");
  return *rec;
}

PlaneOptions plane_options(const RunConfig& config) {
  PlaneOptions opt;
  opt.nx = config.nx;
  opt.ny = config.ny;
  opt.kind = config.variogram;
  return opt;
}

}  // namespace

PlanningPlane plane_for(const Workspace& ws, CityVariable dependent, const PlaneOptions& options) {
  const auto samples = ws.plane_samples(dependent);
  const std::string name(variable_name(dependent));
  if (samples.size() < kMinPlaneSamples) {
    throw AppError(kExitInput, "plane for " + name + " needs at least " +
                                   std::to_string(kMinPlaneSamples) +
                                   " included cities with that value; have " +
                                   std::to_string(samples.size()));
  }
  try {
    return build_plane(samples, options);
  } catch (const Error& e) {
    throw AppError(kExitInput, "plane for " + name + ": " + e.what());
  }
}

void cmd_indicator(const RunConfig& config, std::ostream& out) {
  require_out(config);
  const auto ws = load_workspace(config.load);

  std::ostringstream csv;
  csv << "city_id,status,failure,computed_population,reported_population,relative_error,ds,"
         "intercept,r_squared,n_classes,mean_density,populated_area_km2\n";
  Json cities = Json::array();
  for (const auto& c : ws.cities) {
    const auto& r = c.report;
    csv << csv_field(c.id()) << ',' << status_name(r.status) << ',' << c.failure << ','
        << r.computed_population << ',' << r.reported_population << ','
        << format_double(r.relative_error) << ',';
    if (c.indicator) {
      const auto& ind = *c.indicator;
      csv << format_double(ind.scaling.ds) << ',' << format_double(ind.scaling.intercept) << ','
          << format_double(ind.scaling.r_squared) << ',' << ind.scaling.n_classes_used << ','
          << format_double(ind.mean_density) << ',' << format_double(ind.populated_area_km2);
    } else {
      csv << ",,,,,";
    }
    csv << '\n';
    cities.push_back(Json{{"city_id", c.id()},
                          {"validation", to_json(r)},
                          {"indicator", c.indicator ? to_json(*c.indicator) : Json(nullptr)},
                          {"failure", c.failure}});
  }
  const Json doc{{"version", kSchemaVersion},
                 {"classes", config.load.classify.classes},
                 {"tolerance", config.load.tolerance},
                 {"cities", std::move(cities)},
                 {"warnings", ws.warnings}};
  write_output(config, "indicators.csv", csv.str());
  write_output(config, "indicators.json", doc.dump(2) + "\n");
  if (config.to_stdout) out << csv.str();
}

void cmd_spectrum(const RunConfig& config, std::ostream& out) {
  require_out(config);
  const auto ws = load_workspace(config.load);
  const auto& rec = require_city(ws, config.city);
  FractalSpectrum spectrum;
  try {
    const auto classes = classify_city(rec.dataset, config.load.classify);
    spectrum = fractal_spectrum(classes.aggregates, rec.id());
  } catch (const Error& e) {
    throw AppError(kExitFormat, rec.id() + ": " + e.what());
  }
  const Json doc{{"version", kSchemaVersion},
                 {"city_id", rec.id()},
                 {"bands", to_json(std::span<const SpectrumBand>(spectrum.bands))}};
  write_output(config, "spectrum_" + rec.id() + ".svg", spectrum.svg);
  write_output(config, "spectrum_" + rec.id() + ".json", doc.dump(2) + "\n");
  if (config.to_stdout) out << spectrum.svg;
}

void cmd_correlate(const RunConfig& config, std::ostream& out) {
  require_out(config);
  const auto ws = load_workspace(config.load);
  const auto rows = ws.included_rows();
  if (rows.size() < 3) {
    throw AppError(kExitInput, "correlation needs at least 3 included cities; have " +
                                   std::to_string(rows.size()));
  }
  const VariablePair pairs[] = {{CityVariable::ds, CityVariable::gas_per_area},
                                {CityVariable::ds, CityVariable::co2_per_capita},
                                {CityVariable::mean_density, CityVariable::gas_per_area},
                                {CityVariable::mean_density, CityVariable::co2_per_capita}};
  std::vector<Transform> transforms;
  if (config.transform) {
    transforms.push_back(*config.transform);
  } else {
    transforms.assign(std::begin(kAllTransforms), std::end(kAllTransforms));
  }

  std::ostringstream csv;
  csv << "x,y,transform,pearson_r,n,skipped_missing,skipped_non_positive,error\n";
  Json results = Json::array();
  for (const auto& pair : pairs) {
    for (auto t : transforms) {
      const std::string xs(variable_name(pair.x)), ys(variable_name(pair.y));
      const std::string tn(transform_name(t));
      try {
        const auto r = correlate_cities(rows, pair, t);
        csv << xs << ',' << ys << ',' << tn << ',' << format_double(r.pearson_r) << ',' << r.n
            << ',' << r.skipped_missing << ',' << r.skipped_non_positive << ",\n";
        auto j = to_json(r);
        j["error"] = nullptr;
        results.push_back(std::move(j));
      } catch (const Error& e) {
        csv << xs << ',' << ys << ',' << tn << ",,,,," << code_name(e.code()) << '\n';
        results.push_back(Json{{"x", xs},
                               {"y", ys},
                               {"transform", tn},
                               {"pearson_r", nullptr},
                               {"error", code_name(e.code())},
                               {"message", e.what()}});
      }
    }
  }
  Json city_rows = Json::array();
  for (const auto& r : rows) {
    city_rows.push_back(Json{{"city_id", r.city_id},
                             {"ds", json_opt(r.ds)},
                             {"mean_density", json_opt(r.mean_density)},
                             {"gas_per_area", json_opt(r.gas_per_area)},
                             {"co2_per_capita", json_opt(r.co2_per_capita)}});
  }
  const Json doc{{"version", kSchemaVersion},
                 {"correlations", std::move(results)},
                 {"cities", std::move(city_rows)}};
  write_output(config, "correlations.csv", csv.str());
  write_output(config, "correlations.json", doc.dump(2) + "\n");
  if (config.to_stdout) out << csv.str();
}

void cmd_plane(const RunConfig& config, std::ostream& out) {
  require_out(config);
  const auto ws = load_workspace(config.load);
  const auto plane = plane_for(ws, config.dependent, plane_options(config));
  const std::string dep(variable_name(config.dependent));

  std::ostringstream csv;
  csv << "mean_density,ds," << dep << ",variance\n";
  for (int iy = 0; iy < plane.ny; ++iy) {
    for (int ix = 0; ix < plane.nx; ++ix) {
      const auto i = static_cast<std::size_t>(iy) * plane.nx + ix;
      csv << format_double(plane.raw_x(ix)) << ',' << format_double(plane.raw_y(iy)) << ','
          << format_double(plane.grid[i]) << ',' << format_double(plane.variance[i]) << '\n';
    }
  }
  const auto plane_json = to_json(plane);
  const Json cv{{"version", kSchemaVersion},
                {"dependent", dep},
                {"variogram", plane_json["variogram"]},
                {"cv_stats", plane_json["cv_stats"]},
                {"rmse_over_range", plane.cv.z_range > 0 ? Json(plane.cv.rmse / plane.cv.z_range)
                                                         : Json(nullptr)}};
  write_output(config, "plane_" + dep + ".csv", csv.str());
  write_output(config, "plane_" + dep + ".svg", render_plane_svg(plane, "Planning plane", dep));
  write_output(config, "plane_" + dep + ".json", plane_json.dump() + "\n");
  write_output(config, "plane_" + dep + "_cv.json", cv.dump(2) + "\n");
  if (config.to_stdout) out << cv.dump(2) << '\n';
}

void cmd_scenario(const RunConfig& config, std::ostream& out) {
  require_out(config);
  if (config.delta_file.empty()) throw AppError(kExitInput, "--delta-file is required");
  const std::string text = read_file(config.delta_file);
  ScenarioDelta delta;
  try {
    delta = parse_scenario_delta(text);
  } catch (const Error& e) {
    throw AppError(kExitFormat, config.delta_file.filename().string() + ": " + e.what());
  }
  const auto ws = load_workspace(config.load);
  const auto& rec = require_city(ws, config.city);
  const auto plane = plane_for(ws, config.dependent, plane_options(config));
  ScenarioOutcome outcome;
  try {
    outcome = evaluate_scenario(rec.dataset, delta, plane, config.load.classify);
  } catch (const Error& e) {
    throw AppError(kExitFormat, std::string(code_name(e.code())) + ": " + e.what());
  }
  auto doc = to_json(outcome);
  doc["dependent"] = variable_name(config.dependent);
  const std::string body = doc.dump(2) + "\n";
  write_output(config, "scenario_" + rec.id() + ".json", body);
  if (config.to_stdout) out << body;
}

}  // namespace urbscale::app
