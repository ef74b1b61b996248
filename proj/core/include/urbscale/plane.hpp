#pragma once

// Planning plane: a kriged surface of a dependent variable over
// (mean population density, scaling indicator).

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "urbscale/kriging.hpp"
#include "urbscale/variogram.hpp"

namespace urbscale {

inline constexpr std::size_t kMinPlaneSamples = 10;

/// z-score transform of one axis. A zero spread maps to unit scale.
struct AxisScale {
  double mean = 0.0;
  double std = 1.0;

  double to_standard(double v) const noexcept { return (v - mean) / std; }
  double from_standard(double s) const noexcept { return mean + s * std; }
};

struct CrossValidation {
  double rmse = 0.0;
  double bias = 0.0;  // mean(estimate - observed)
  double max_abs_error = 0.0;
  double z_range = 0.0;
  std::size_t n = 0;
};

struct PlaneOptions {
  int nx = 100;
  int ny = 100;
  VariogramKind kind = VariogramKind::exponential;
  int lag_bins = 12;
  double margin = 0.05;
  /// Use this model instead of fitting one.
  std::optional<VariogramModel> fixed_variogram;
};

struct LocateResult {
  double estimate = 0.0;
  double variance = 0.0;
  bool inside_hull = false;
};

struct PlanePoint {
  double x = 0.0;
  double y = 0.0;
};

struct PlanningPlane {
  int nx = 0;
  int ny = 0;
  std::vector<double> x_axis;  // standardized coordinates, ascending
  std::vector<double> y_axis;
  std::vector<double> grid;      // ny * nx, row-major by y
  std::vector<double> variance;  // same layout as grid
  AxisScale x_scale;
  AxisScale y_scale;
  VariogramModel variogram;
  bool variogram_fallback = false;
  std::string variogram_warning;
  std::vector<LagBin> empirical;
  CrossValidation cv;
  std::vector<SamplePoint> samples;  // raw coordinates, duplicates merged
  std::vector<PlanePoint> hull;      // standardized, counter-clockwise
  std::shared_ptr<const OrdinaryKriging> kriging;

  double at(int ix, int iy) const { return grid[static_cast<std::size_t>(iy) * nx + ix]; }
  double raw_x(int ix) const { return x_scale.from_standard(x_axis[ix]); }
  double raw_y(int iy) const { return y_scale.from_standard(y_axis[iy]); }
};

/// Convex hull by monotone chain, counter-clockwise, collinear points dropped.
std::vector<PlanePoint> convex_hull(std::vector<PlanePoint> points);
bool inside_hull(std::span<const PlanePoint> hull, PlanePoint p, double eps = 1e-9);

/// Standardizes both axes, fits the variogram, kriges every grid node and
/// runs leave-one-out cross-validation. Throws Error(insufficient_data) below
/// kMinPlaneSamples samples.
PlanningPlane build_plane(std::span<const SamplePoint> samples, const PlaneOptions& options = {});

/// Kriged estimate at raw (mean density, ds), flagged when outside the
/// sample convex hull. Throws Error(non_finite_query) for NaN/inf input.
LocateResult locate(const PlanningPlane& plane, double x, double y);

}  // namespace urbscale
