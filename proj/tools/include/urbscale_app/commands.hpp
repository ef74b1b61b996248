#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "urbscale/plane.hpp"
#include "urbscale/stats.hpp"
#include "urbscale/variogram.hpp"
#include "urbscale_app/workspace.hpp"

namespace urbscale::app {

struct RunConfig {
  LoadOptions load;
  std::filesystem::path out;
  VariogramKind variogram = VariogramKind::exponential;
  int nx = 100;
  int ny = 100;
  std::optional<Transform> transform;  // unset: all transforms
  std::string city;
  CityVariable dependent = CityVariable::gas_per_area;
  std::filesystem::path delta_file;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path static_dir;
  bool to_stdout = false;
};

// Each command writes fixed filenames under config.out and throws AppError on
// failure. With config.to_stdout the main artifact is also written to `out`.
void cmd_indicator(const RunConfig& config, std::ostream& out);
void cmd_spectrum(const RunConfig& config, std::ostream& out);
void cmd_correlate(const RunConfig& config, std::ostream& out);
void cmd_plane(const RunConfig& config, std::ostream& out);
void cmd_scenario(const RunConfig& config, std::ostream& out);

/// Builds the plane for one dependent variable from a loaded workspace.
/// Throws AppError(kExitInput) when there are too few usable cities.
PlanningPlane plane_for(const Workspace& ws, CityVariable dependent, const PlaneOptions& options);

/// Full command-line entry point; returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Sets the spdlog level from URBSCALE_LOG (default: warn). Logs go to stderr.
void init_logging();

}  // namespace urbscale::app
