#pragma once

// Scaling indicator D_s: log-log slope of class area against inverse class
// density, computed from density classes of a city's census blocks.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "urbscale/census.hpp"
#include "urbscale/cluster1d.hpp"

namespace urbscale {

struct ClassAggregate {
  int class_index = 0;
  double area_km2 = 0.0;
  std::int64_t population = 0;
  double density = 0.0;  // population / area_km2

  bool operator==(const ClassAggregate&) const = default;
};

/// One regression point: x = log10(1 / density), y = log10(area).
struct LogPoint {
  double x = 0.0;
  double y = 0.0;
};

struct ScalingOptions {
  /// Weight each class by its population in the regression (off by default).
  bool weight_by_population = false;
};

struct ScalingResult {
  double ds = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<LogPoint> points;
  int n_classes_used = 0;
  int dropped_classes = 0;
};

enum class ClusterSolver { exact, lloyd };

struct ClassifyOptions {
  int classes = kDefaultClasses;
  ClusterSolver solver = ClusterSolver::exact;
  /// Weight each block by its area when clustering (off by default).
  bool area_weighted = false;
};

/// The density classing of a city's populated blocks.
struct CityClasses {
  std::vector<Block> blocks;  // populated blocks, ascending density (stable)
  Classing classing;
  std::vector<ClassAggregate> aggregates;
  std::size_t excluded_zero_population = 0;
  int requested_classes = 0;
  int effective_classes = 0;
  std::vector<std::string> warnings;
};

struct CityIndicator {
  ScalingResult scaling;
  double mean_density = 0.0;  // populated population / populated area
  double populated_area_km2 = 0.0;
  std::int64_t populated_population = 0;
  std::size_t excluded_zero_population = 0;
  int effective_classes = 0;
  std::vector<std::string> warnings;
};

/// A box count for the grid-based baseline: coverage fraction x in (0, 1]
/// and the number of boxes N_x in that range.
struct BoxCount {
  double coverage = 0.0;
  std::int64_t boxes = 0;
};

/// Populated blocks (population > 0) sorted by ascending density; equal
/// densities keep their dataset order.
std::vector<Block> populated_blocks_by_density(const CityDataset& dataset);

/// Per-class area, population and density. `classing` must come from the
/// densities of populated_blocks_by_density(dataset). Zero-population classes
/// are dropped.
std::vector<ClassAggregate> aggregate_classes(const CityDataset& dataset, const Classing& classing);
std::vector<ClassAggregate> aggregate_classes(std::span<const Block> sorted_blocks,
                                              const Classing& classing);

/// OLS of log10(area) on log10(1/density). Throws Error(insufficient_classes)
/// below 3 usable classes and Error(degenerate_spectrum) when all densities
/// coincide.
ScalingResult scaling_indicator(std::span<const ClassAggregate> aggregates,
                                const ScalingOptions& options = {});

/// Filter, sort and cluster a city's blocks. The class count is lowered to the
/// number of distinct densities when needed, with a warning.
CityClasses classify_city(const CityDataset& dataset, const ClassifyOptions& options = {});

CityIndicator city_indicator(const CityDataset& dataset, const ClassifyOptions& options = {},
                             const ScalingOptions& scaling = {});
CityIndicator city_indicator(const CityDataset& dataset, int classes);

/// Box-counting dimension: OLS slope of log10(N_x) on log10(1/x).
double box_counting_dimension(std::span<const BoxCount> counts);

}  // namespace urbscale
