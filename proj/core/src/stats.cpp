#include "urbscale/stats.hpp"

#include <algorithm>
#include <cmath>

#include "urbscale/error.hpp"

namespace urbscale {

RegressionFit ols(std::span<const double> xs, std::span<const double> ys,
                  std::span<const double> weights) {
  const std::size_t n = xs.size();
  if (ys.size() != n) throw Error(ErrorCode::invalid_argument, "xs and ys differ in length");
  if (!weights.empty() && weights.size() != n) {
    throw Error(ErrorCode::invalid_argument, "weights differ in length");
  }
  if (n < 2) throw Error(ErrorCode::degenerate_input, "regression needs at least 2 points");
  auto w = [&](std::size_t i) { return weights.empty() ? 1.0 : weights[i]; };

  double sw = 0.0, sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sw += w(i);
    sx += w(i) * xs[i];
    sy += w(i) * ys[i];
  }
  const double mx = sx / sw, my = sy / sw;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxx += w(i) * dx * dx;
    sxy += w(i) * dx * dy;
    syy += w(i) * dy * dy;
  }
  if (!(sxx > 0.0)) throw Error(ErrorCode::degenerate_input, "all x values are equal");

  RegressionFit fit;
  fit.n = n;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.residuals.resize(n);
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    fit.residuals[i] = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss_res += w(i) * fit.residuals[i] * fit.residuals[i];
  }
  if (syy > 0.0) {
    fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  } else {
    fit.degenerate = true;
    fit.r_squared = 0.0;
  }
  return fit;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  const std::size_t n = xs.size();
  if (ys.size() != n) throw Error(ErrorCode::invalid_argument, "xs and ys differ in length");
  if (n < 2) throw Error(ErrorCode::insufficient_data, "correlation needs at least 2 points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) {
    throw Error(ErrorCode::zero_variance, "correlation undefined: a variable has zero variance");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::string_view transform_name(Transform t) noexcept {
  switch (t) {
    case Transform::linear: return "linear";
    case Transform::log_x: return "log_x";
    case Transform::log_y: return "log_y";
    case Transform::log_log: return "log_log";
  }
  return "linear";
}

std::optional<Transform> parse_transform(std::string_view name) noexcept {
  for (auto t : kAllTransforms) {
    if (transform_name(t) == name) return t;
  }
  return std::nullopt;
}

std::string_view variable_name(CityVariable v) noexcept {
  switch (v) {
    case CityVariable::ds: return "ds";
    case CityVariable::mean_density: return "mean_density";
    case CityVariable::gas_per_area: return "gas_per_area";
    case CityVariable::co2_per_capita: return "co2_per_capita";
  }
  return "ds";
}

std::optional<CityVariable> parse_variable(std::string_view name) noexcept {
  for (auto v : {CityVariable::ds, CityVariable::mean_density, CityVariable::gas_per_area,
                 CityVariable::co2_per_capita}) {
    if (variable_name(v) == name) return v;
  }
  return std::nullopt;
}

std::optional<double> CityRow::get(CityVariable v) const noexcept {
  switch (v) {
    case CityVariable::ds: return ds;
    case CityVariable::mean_density: return mean_density;
    case CityVariable::gas_per_area: return gas_per_area;
    case CityVariable::co2_per_capita: return co2_per_capita;
  }
  return std::nullopt;
}

CorrelationResult correlate_cities(std::span<const CityRow> rows, VariablePair pair,
                                   Transform transform) {
  CorrelationResult result;
  result.x_label = std::string(variable_name(pair.x));
  result.y_label = std::string(variable_name(pair.y));
  result.transform = transform;
  const bool log_x = transform == Transform::log_x || transform == Transform::log_log;
  const bool log_y = transform == Transform::log_y || transform == Transform::log_log;

  std::vector<double> xs, ys;
  for (const auto& row : rows) {
    auto x = row.get(pair.x);
    auto y = row.get(pair.y);
    if (!x || !y) {
      ++result.skipped_missing;
      continue;
    }
    if ((log_x && !(*x > 0.0)) || (log_y && !(*y > 0.0))) {
      ++result.skipped_non_positive;
      result.warnings.push_back("city '" + row.city_id +
                                "' skipped: non-positive value under log transform");
      continue;
    }
    xs.push_back(log_x ? std::log10(*x) : *x);
    ys.push_back(log_y ? std::log10(*y) : *y);
  }
  result.n = xs.size();
  if (result.n < 3) {
    throw Error(ErrorCode::insufficient_data,
                "correlation of " + result.x_label + " vs " + result.y_label + " needs 3 cities, " +
                    std::to_string(result.n) + " usable");
  }
  result.pearson_r = pearson(xs, ys);
  return result;
}

}  // namespace urbscale
