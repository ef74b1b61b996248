#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace urbscale {

struct RegressionFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// 1 - SS_res/SS_tot, clamped to [0, 1]; 0 when SS_tot = 0.
  double r_squared = 0.0;
  std::size_t n = 0;
  std::vector<double> residuals;
  /// Set when SS_tot = 0 (constant response).
  bool degenerate = false;
};

/// Closed-form ordinary least squares of ys on xs. `weights` empty means
/// unweighted. Throws Error(degenerate_input) for n < 2 or constant xs.
RegressionFit ols(std::span<const double> xs, std::span<const double> ys,
                  std::span<const double> weights = {});

/// Pearson correlation. Throws Error(zero_variance) when either side is constant.
double pearson(std::span<const double> xs, std::span<const double> ys);

enum class Transform { linear, log_x, log_y, log_log };

std::string_view transform_name(Transform t) noexcept;
std::optional<Transform> parse_transform(std::string_view name) noexcept;
inline constexpr Transform kAllTransforms[] = {Transform::linear, Transform::log_x,
                                               Transform::log_y, Transform::log_log};

/// City-level variables available for cross-city correlation.
enum class CityVariable { ds, mean_density, gas_per_area, co2_per_capita };

std::string_view variable_name(CityVariable v) noexcept;
std::optional<CityVariable> parse_variable(std::string_view name) noexcept;

struct CityRow {
  std::string city_id;
  std::optional<double> ds;
  std::optional<double> mean_density;
  std::optional<double> gas_per_area;
  std::optional<double> co2_per_capita;

  std::optional<double> get(CityVariable v) const noexcept;
};

struct VariablePair {
  CityVariable x = CityVariable::ds;
  CityVariable y = CityVariable::gas_per_area;
};

struct CorrelationResult {
  double pearson_r = 0.0;
  std::size_t n = 0;
  std::string x_label;
  std::string y_label;
  Transform transform = Transform::linear;
  std::size_t skipped_missing = 0;
  std::size_t skipped_non_positive = 0;
  std::vector<std::string> warnings;
};

/// Pearson r across cities on the selected pair, with an optional log10
/// transform. Rows missing either field are skipped and counted; rows with a
/// non-positive value under a log axis are skipped with a warning.
/// Throws Error(insufficient_data) below 3 usable rows and Error(zero_variance)
/// when either side is constant.
CorrelationResult correlate_cities(std::span<const CityRow> rows, VariablePair pair,
                                   Transform transform);

}  // namespace urbscale
