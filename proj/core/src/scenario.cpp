#include "urbscale/scenario.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

#include "urbscale/error.hpp"

namespace urbscale {

CityDataset apply_delta(const CityDataset& dataset, const ScenarioDelta& delta) {
  std::unordered_map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < dataset.blocks().size(); ++i) {
    position.emplace(dataset.blocks()[i].block_id, i);
  }

  std::set<std::string> removed;
  for (const auto& id : delta.removed) {
    if (!position.contains(id)) throw Error(ErrorCode::unknown_id, "cannot remove unknown block '" + id + "'");
    if (!removed.insert(id).second) {
      throw Error(ErrorCode::id_collision, "block '" + id + "' removed twice");
    }
  }

  std::map<std::string, std::int64_t> modified;
  for (const auto& m : delta.modified) {
    if (!position.contains(m.block_id)) {
      throw Error(ErrorCode::unknown_id, "cannot modify unknown block '" + m.block_id + "'");
    }
    if (removed.contains(m.block_id)) {
      throw Error(ErrorCode::id_collision, "block '" + m.block_id + "' is both modified and removed");
    }
    if (m.population < 0) {
      throw Error(ErrorCode::negative_population,
                  "negative population for block '" + m.block_id + "'");
    }
    if (!modified.emplace(m.block_id, m.population).second) {
      throw Error(ErrorCode::id_collision, "block '" + m.block_id + "' modified twice");
    }
  }

  std::map<std::string, const Block*> replacing;  // added ids that reuse a removed slot
  std::map<std::string, const Block*> appended;
  for (const auto& b : delta.added_blocks) {
    if (b.population < 0) {
      throw Error(ErrorCode::negative_population,
                  "negative population for added block '" + b.block_id + "'");
    }
    if (!(b.area_km2 > 0.0)) {
      throw Error(ErrorCode::non_positive_area,
                  "non-positive area for added block '" + b.block_id + "'");
    }
    if (b.block_id.empty()) throw Error(ErrorCode::invalid_argument, "added block has no id");
    const bool exists = position.contains(b.block_id);
    if (exists && !removed.contains(b.block_id)) {
      throw Error(ErrorCode::id_collision, "added block '" + b.block_id + "' already exists");
    }
    auto& target = exists ? replacing : appended;
    if (replacing.contains(b.block_id) || appended.contains(b.block_id)) {
      throw Error(ErrorCode::id_collision, "block '" + b.block_id + "' added twice");
    }
    target.emplace(b.block_id, &b);
  }

  std::int64_t net = 0;
  std::vector<Block> blocks;
  blocks.reserve(dataset.blocks().size() + appended.size());
  for (const auto& b : dataset.blocks()) {
    if (auto r = replacing.find(b.block_id); r != replacing.end()) {
      blocks.push_back(*r->second);
      net += r->second->population - b.population;
      continue;
    }
    if (removed.contains(b.block_id)) {
      net -= b.population;
      continue;
    }
    Block copy = b;
    if (auto m = modified.find(b.block_id); m != modified.end()) {
      net += m->second - b.population;
      copy.population = m->second;
    }
    blocks.push_back(std::move(copy));
  }
  for (const auto& [id, block] : appended) {
    blocks.push_back(*block);
    net += block->population;
  }
  const auto reported = std::max<std::int64_t>(1, dataset.reported_population() + net);
  return CityDataset(dataset.city_id(), std::move(blocks), reported, dataset.observables());
}

ScenarioOutcome evaluate_scenario(const CityDataset& base, const ScenarioDelta& delta,
                                  const PlanningPlane& plane, const ClassifyOptions& options) {
  auto point = [&](const CityDataset& city, std::vector<std::string>& warnings) {
    const auto ind = city_indicator(city, options);
    const auto loc = locate(plane, ind.mean_density, ind.scaling.ds);
    warnings.insert(warnings.end(), ind.warnings.begin(), ind.warnings.end());
    return ScenarioPoint{ind.scaling.ds, ind.mean_density, loc.estimate, loc.variance,
                         loc.inside_hull};
  };

  ScenarioOutcome out;
  out.city_id = base.city_id();
  std::vector<std::string> base_warnings, scenario_warnings;
  out.base = point(base, base_warnings);
  out.scenario = delta.empty() ? out.base : point(apply_delta(base, delta), scenario_warnings);
  for (auto& w : base_warnings) out.warnings.push_back("base: " + w);
  for (auto& w : scenario_warnings) out.warnings.push_back("scenario: " + w);
  if (!out.scenario.inside_hull) {
    out.warnings.push_back("scenario point lies outside the sample hull (extrapolation)");
  }
  out.delta_ds = out.scenario.ds - out.base.ds;
  out.delta_mean_density = out.scenario.mean_density - out.base.mean_density;
  out.delta_plane_estimate = out.scenario.plane_estimate - out.base.plane_estimate;
  return out;
}

}  // namespace urbscale
