#pragma once

// Census block ingest: parsing, validation and normalization of per-city
// block tables and city-level observables.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace urbscale {

inline constexpr double kDefaultPopulationTolerance = 0.01;

inline constexpr std::string_view kBlockCsvHeader = "block_id,area_km2,population";
inline constexpr std::string_view kObservablesCsvHeader =
    "city_id,reported_population,gas_sales_2007_usd,payroll_2007_usd,payroll_2010_usd,co2_road_tpc";

/// One census block. Density is derived, never stored.
struct Block {
  std::string block_id;
  double area_km2 = 0.0;
  std::int64_t population = 0;

  double density() const noexcept { return static_cast<double>(population) / area_km2; }

  bool operator==(const Block&) const = default;
};

/// City-level observables. An absent field stays absent; it is never read as zero.
struct CityObservables {
  std::optional<double> gas_sales_2007;
  std::optional<double> payroll_2007;
  std::optional<double> payroll_2010;
  std::optional<double> co2_road_per_capita;

  bool operator==(const CityObservables&) const = default;
};

/// A validated, immutable set of blocks for one city.
///
/// Construction enforces: at least one block, unique block ids, positive
/// areas, non-negative populations and a positive reported population.
class CityDataset {
 public:
  CityDataset(std::string city_id, std::vector<Block> blocks, std::int64_t reported_population,
              CityObservables observables = {});

  const std::string& city_id() const noexcept { return city_id_; }
  std::span<const Block> blocks() const noexcept { return blocks_; }
  std::int64_t reported_population() const noexcept { return reported_population_; }
  const CityObservables& observables() const noexcept { return observables_; }

  std::int64_t total_population() const noexcept;
  double total_area() const noexcept;
  /// Area of blocks with population > 0.
  double populated_area() const noexcept;
  std::size_t zero_population_blocks() const noexcept;

  bool operator==(const CityDataset&) const = default;

 private:
  std::string city_id_;
  std::vector<Block> blocks_;
  std::int64_t reported_population_;
  CityObservables observables_;
};

enum class ValidationStatus { included, excluded_population_mismatch, excluded_missing_energy };

std::string_view status_name(ValidationStatus status) noexcept;

struct ValidationReport {
  std::string city_id;
  std::int64_t computed_population = 0;
  std::int64_t reported_population = 0;
  double relative_error = 0.0;
  ValidationStatus status = ValidationStatus::included;

  bool operator==(const ValidationReport&) const = default;
};

/// One row of the shared observables file.
struct ObservablesRow {
  std::string city_id;
  std::int64_t reported_population = 0;
  CityObservables observables;

  bool operator==(const ObservablesRow&) const = default;
};

/// Parses a block table. Throws ParseError with the offending row number.
std::vector<Block> parse_blocks(std::string_view text);

/// Parses a block table with no observables; the reported population is
/// taken to be the computed one.
CityDataset parse_city(std::string_view text, std::string city_id);
CityDataset parse_city(std::string_view text, const ObservablesRow& row);

std::string serialize_blocks(std::span<const Block> blocks);

std::vector<ObservablesRow> parse_observables(std::string_view text);
std::string serialize_observables(std::span<const ObservablesRow> rows);

/// Never throws. Population mismatch is checked before missing energy data.
ValidationReport validate_city(const CityDataset& dataset,
                               double tolerance = kDefaultPopulationTolerance);

/// True when the observables needed for the gasoline extrapolation are present
/// and usable.
bool has_energy_observables(const CityObservables& obs) noexcept;

/// 2010 gasoline sales estimated from 2007 sales scaled by payroll growth.
double extrapolate_sales(const CityObservables& obs);

}  // namespace urbscale
