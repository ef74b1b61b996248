#pragma once

// JSON views of the result types. Key order is fixed so that output is
// byte-stable for identical input.

#include <nlohmann/json.hpp>
#include <string_view>

#include "urbscale/census.hpp"
#include "urbscale/cluster1d.hpp"
#include "urbscale/plane.hpp"
#include "urbscale/scaling.hpp"
#include "urbscale/scenario.hpp"
#include "urbscale/spectrum.hpp"
#include "urbscale/stats.hpp"

namespace urbscale {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kSchemaVersion = "1";

Json to_json(const Block& block);
Json to_json(const ValidationReport& report);
Json to_json(const Classing& classing);
Json to_json(const ClassAggregate& aggregate);
Json to_json(const ScalingResult& result);
Json to_json(const CityIndicator& indicator);
Json to_json(const SpectrumBand& band);
Json to_json(std::span<const SpectrumBand> bands);
Json to_json(const CorrelationResult& result);
Json to_json(const VariogramModel& model);
Json to_json(const PlanningPlane& plane);
Json to_json(const ScenarioDelta& delta);
Json to_json(const ScenarioOutcome& outcome);

/// Strict parse: unknown keys, wrong types or a non-integral population throw
/// Error(malformed_document).
ScenarioDelta scenario_delta_from_json(const Json& json);
ScenarioDelta parse_scenario_delta(std::string_view text);

}  // namespace urbscale
