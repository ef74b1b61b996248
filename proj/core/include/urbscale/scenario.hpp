#pragma once

// Ex-ante scenarios: hypothetical development applied to a city's blocks,
// read off a fixed planning plane.

#include <cstdint>
#include <string>
#include <vector>

#include "urbscale/census.hpp"
#include "urbscale/plane.hpp"
#include "urbscale/scaling.hpp"

namespace urbscale {

struct PopulationChange {
  std::string block_id;
  std::int64_t population = 0;

  bool operator==(const PopulationChange&) const = default;
};

struct ScenarioDelta {
  std::vector<Block> added_blocks;
  std::vector<PopulationChange> modified;
  std::vector<std::string> removed;

  bool empty() const noexcept {
    return added_blocks.empty() && modified.empty() && removed.empty();
  }
  bool operator==(const ScenarioDelta&) const = default;
};

struct ScenarioPoint {
  double ds = 0.0;
  double mean_density = 0.0;
  double plane_estimate = 0.0;
  double plane_variance = 0.0;
  bool inside_hull = false;
};

struct ScenarioOutcome {
  std::string city_id;
  ScenarioPoint base;
  ScenarioPoint scenario;
  double delta_ds = 0.0;
  double delta_mean_density = 0.0;
  double delta_plane_estimate = 0.0;
  std::vector<std::string> warnings;
};

/// Returns a new dataset with `delta` applied; `dataset` is untouched.
///
/// Surviving blocks keep their order. An added block whose id was removed in
/// the same delta takes the removed block's position; other added blocks are
/// appended in id order. The reported population moves by the net population
/// change (floored at 1).
///
/// Throws Error(unknown_id) for modified/removed ids not in the city,
/// Error(id_collision) for added ids already present or repeated ids,
/// Error(negative_population) and Error(non_positive_area) for bad values.
CityDataset apply_delta(const CityDataset& dataset, const ScenarioDelta& delta);

/// Scaling indicator and plane position for the base city and the modified
/// city. The plane is not rebuilt.
ScenarioOutcome evaluate_scenario(const CityDataset& base, const ScenarioDelta& delta,
                                  const PlanningPlane& plane,
                                  const ClassifyOptions& options = {});

}  // namespace urbscale
