#include "urbscale/serialize.hpp"

#include <algorithm>
#include <set>

#include "urbscale/error.hpp"

namespace urbscale {
namespace {

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::malformed_document, "scenario delta: " + what);
}

void only_keys(const Json& obj, std::initializer_list<std::string_view> keys, const char* where) {
  if (!obj.is_object()) malformed(std::string(where) + " must be an object");
  for (const auto& [k, v] : obj.items()) {
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
      malformed("unexpected key '" + k + "' in " + where);
    }
  }
}

std::string need_string(const Json& obj, const char* key) {
  if (!obj.contains(key) || !obj[key].is_string()) malformed(std::string(key) + " must be a string");
  return obj[key].get<std::string>();
}

std::int64_t need_integer(const Json& obj, const char* key) {
  if (!obj.contains(key) || !obj[key].is_number_integer()) {
    malformed(std::string(key) + " must be an integer");
  }
  return obj[key].get<std::int64_t>();
}

double need_number(const Json& obj, const char* key) {
  if (!obj.contains(key) || !obj[key].is_number()) malformed(std::string(key) + " must be a number");
  return obj[key].get<double>();
}

Json grid_rows(const std::vector<double>& cells, int nx, int ny) {
  Json rows = Json::array();
  for (int iy = 0; iy < ny; ++iy) {
    Json row = Json::array();
    for (int ix = 0; ix < nx; ++ix) row.push_back(cells[static_cast<std::size_t>(iy) * nx + ix]);
    rows.push_back(std::move(row));
  }
  return rows;
}

Json point_json(const ScenarioPoint& p) {
  return Json{{"ds", p.ds},
              {"mean_density", p.mean_density},
              {"plane_estimate", p.plane_estimate},
              {"plane_variance", p.plane_variance},
              {"inside_hull", p.inside_hull}};
}

}  // namespace

Json to_json(const Block& b) {
  return Json{{"block_id", b.block_id}, {"area_km2", b.area_km2}, {"population", b.population}};
}

Json to_json(const ValidationReport& r) {
  return Json{{"city_id", r.city_id},
              {"computed_population", r.computed_population},
              {"reported_population", r.reported_population},
              {"relative_error", r.relative_error},
              {"status", status_name(r.status)}};
}

Json to_json(const Classing& c) {
  return Json{{"boundaries", c.boundaries},
              {"starts", c.starts},
              {"centroids", c.centroids},
              {"within_ss", c.within_ss},
              {"iterations", c.iterations}};
}

Json to_json(const ClassAggregate& a) {
  return Json{{"class_index", a.class_index},
              {"area_km2", a.area_km2},
              {"population", a.population},
              {"density", a.density}};
}

Json to_json(const ScalingResult& r) {
  Json points = Json::array();
  for (const auto& p : r.points) points.push_back(Json::array({p.x, p.y}));
  return Json{{"ds", r.ds},
              {"intercept", r.intercept},
              {"r_squared", r.r_squared},
              {"n_classes_used", r.n_classes_used},
              {"dropped_classes", r.dropped_classes},
              {"points", std::move(points)}};
}

Json to_json(const CityIndicator& ind) {
  return Json{{"scaling", to_json(ind.scaling)},
              {"mean_density", ind.mean_density},
              {"populated_area_km2", ind.populated_area_km2},
              {"populated_population", ind.populated_population},
              {"excluded_zero_population", ind.excluded_zero_population},
              {"effective_classes", ind.effective_classes},
              {"warnings", ind.warnings}};
}

Json to_json(const SpectrumBand& b) {
  return Json{{"density", b.density}, {"area_km2", b.area_km2}, {"color_bin", b.color_bin}};
}

Json to_json(std::span<const SpectrumBand> bands) {
  Json out = Json::array();
  for (const auto& b : bands) out.push_back(to_json(b));
  return out;
}

Json to_json(const CorrelationResult& r) {
  return Json{{"x", r.x_label},
              {"y", r.y_label},
              {"transform", transform_name(r.transform)},
              {"pearson_r", r.pearson_r},
              {"n", r.n},
              {"skipped_missing", r.skipped_missing},
              {"skipped_non_positive", r.skipped_non_positive},
              {"warnings", r.warnings}};
}

Json to_json(const VariogramModel& m) {
  return Json{{"kind", variogram_name(m.kind)},
              {"nugget", m.nugget},
              {"sill", m.sill},
              {"range", m.range}};
}

Json to_json(const PlanningPlane& p) {
  Json x_raw = Json::array(), y_raw = Json::array();
  for (int i = 0; i < p.nx; ++i) x_raw.push_back(p.raw_x(i));
  for (int i = 0; i < p.ny; ++i) y_raw.push_back(p.raw_y(i));
  Json empirical = Json::array();
  for (const auto& b : p.empirical) {
    empirical.push_back(
        Json{{"lag", b.lag}, {"semivariance", b.semivariance}, {"pair_count", b.pair_count}});
  }
  Json samples = Json::array();
  for (const auto& s : p.samples) samples.push_back(Json{{"x", s.x}, {"y", s.y}, {"z", s.z}});
  Json hull = Json::array();
  for (const auto& h : p.hull) hull.push_back(Json::array({h.x, h.y}));
  Json variogram = to_json(p.variogram);
  variogram["fallback"] = p.variogram_fallback;
  variogram["warning"] = p.variogram_warning;
  return Json{{"version", kSchemaVersion},
              {"nx", p.nx},
              {"ny", p.ny},
              {"x_axis", std::move(x_raw)},
              {"y_axis", std::move(y_raw)},
              {"x_axis_standard", p.x_axis},
              {"y_axis_standard", p.y_axis},
              {"standardization",
               Json{{"x", Json{{"mean", p.x_scale.mean}, {"std", p.x_scale.std}}},
                    {"y", Json{{"mean", p.y_scale.mean}, {"std", p.y_scale.std}}}}},
              {"grid", grid_rows(p.grid, p.nx, p.ny)},
              {"variance", grid_rows(p.variance, p.nx, p.ny)},
              {"variogram", std::move(variogram)},
              {"empirical_variogram", std::move(empirical)},
              {"cv_stats",
               Json{{"rmse", p.cv.rmse},
                    {"bias", p.cv.bias},
                    {"max_abs_error", p.cv.max_abs_error},
                    {"z_range", p.cv.z_range},
                    {"n", p.cv.n}}},
              {"samples", std::move(samples)},
              {"hull_standard", std::move(hull)}};
}

Json to_json(const ScenarioDelta& d) {
  Json added = Json::array(), modified = Json::array();
  for (const auto& b : d.added_blocks) added.push_back(to_json(b));
  for (const auto& m : d.modified) {
    modified.push_back(Json{{"block_id", m.block_id}, {"population", m.population}});
  }
  return Json{{"added_blocks", std::move(added)},
              {"modified", std::move(modified)},
              {"removed", d.removed}};
}

Json to_json(const ScenarioOutcome& o) {
  return Json{{"city_id", o.city_id},
              {"base", point_json(o.base)},
              {"scenario", point_json(o.scenario)},
              {"delta",
               Json{{"ds", o.delta_ds},
                    {"mean_density", o.delta_mean_density},
                    {"plane_estimate", o.delta_plane_estimate}}},
              {"warnings", o.warnings}};
}

ScenarioDelta scenario_delta_from_json(const Json& json) {
  only_keys(json, {"added_blocks", "modified", "removed"}, "delta");
  ScenarioDelta delta;
  if (json.contains("added_blocks")) {
    if (!json["added_blocks"].is_array()) malformed("added_blocks must be an array");
    for (const auto& b : json["added_blocks"]) {
      only_keys(b, {"block_id", "area_km2", "population"}, "added block");
      delta.added_blocks.push_back(
          Block{need_string(b, "block_id"), need_number(b, "area_km2"), need_integer(b, "population")});
    }
  }
  if (json.contains("modified")) {
    if (!json["modified"].is_array()) malformed("modified must be an array");
    for (const auto& m : json["modified"]) {
      only_keys(m, {"block_id", "population"}, "modified entry");
      delta.modified.push_back(PopulationChange{need_string(m, "block_id"), need_integer(m, "population")});
    }
  }
  if (json.contains("removed")) {
    if (!json["removed"].is_array()) malformed("removed must be an array");
    for (const auto& r : json["removed"]) {
      if (!r.is_string()) malformed("removed entries must be strings");
      delta.removed.push_back(r.get<std::string>());
    }
  }
  return delta;
}

ScenarioDelta parse_scenario_delta(std::string_view text) {
  Json json;
  try {
    json = Json::parse(text);
  } catch (const Json::parse_error& e) {
    malformed(e.what());
  }
  return scenario_delta_from_json(json);
}

}  // namespace urbscale
