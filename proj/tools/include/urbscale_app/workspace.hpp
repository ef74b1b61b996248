#pragma once

// Loading a directory of city block tables plus the shared observables file
// into an immutable snapshot used by both the CLI and the service.

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "urbscale/census.hpp"
#include "urbscale/plane.hpp"
#include "urbscale/scaling.hpp"
#include "urbscale/stats.hpp"

namespace urbscale::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;   // missing input, bad environment
inline constexpr int kExitFormat = 2;  // malformed data

/// A failure that ends a command with a specific exit code.
class AppError : public std::runtime_error {
 public:
  AppError(int exit_code, const std::string& message)
      : std::runtime_error(message), exit_code_(exit_code) {}
  int exit_code() const noexcept { return exit_code_; }

 private:
  int exit_code_;
};

struct LoadOptions {
  std::filesystem::path blocks_dir;
  std::filesystem::path observables;
  double tolerance = kDefaultPopulationTolerance;
  ClassifyOptions classify;
  unsigned jobs = 0;  // 0: one per hardware thread
};

struct CityRecord {
  CityDataset dataset;
  ValidationReport report;
  std::optional<CityIndicator> indicator;
  std::string failure;  // error code when the indicator could not be computed

  const std::string& id() const noexcept { return dataset.city_id(); }
  bool included() const noexcept {
    return report.status == ValidationStatus::included && indicator.has_value();
  }
  /// 2010 gasoline sales estimate over the total block area.
  std::optional<double> gas_per_area() const;
  std::optional<double> co2_per_capita() const;
  std::optional<double> dependent(CityVariable v) const;
  CityRow row() const;
};

struct Workspace {
  LoadOptions options;
  std::vector<CityRecord> cities;  // sorted by city id
  std::vector<std::string> warnings;

  const CityRecord* find(std::string_view city_id) const noexcept;
  std::vector<CityRow> included_rows() const;
  /// (mean density, ds, dependent) for included cities that have the value.
  std::vector<SamplePoint> plane_samples(CityVariable dependent) const;
};

/// Reads `<city_id>.csv` files from the blocks directory in parallel.
/// Throws AppError(kExitInput) for missing paths or an empty directory and
/// AppError(kExitFormat) for parse errors, case-insensitive duplicate city
/// files, or a city absent from the observables file.
Workspace load_workspace(const LoadOptions& options);

std::string read_file(const std::filesystem::path& path);

}  // namespace urbscale::app
