#include "urbscale/plane.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "urbscale/error.hpp"

namespace urbscale {
namespace {

AxisScale fit_scale(std::span<const SamplePoint> samples, double SamplePoint::*field) {
  const auto n = static_cast<double>(samples.size());
  double mean = 0.0;
  for (const auto& s : samples) mean += s.*field;
  mean /= n;
  double var = 0.0;
  for (const auto& s : samples) var += (s.*field - mean) * (s.*field - mean);
  const double sd = std::sqrt(var / n);
  return AxisScale{mean, sd > 0.0 ? sd : 1.0};
}

std::vector<double> axis(double lo, double hi, int count) {
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    out[i] = count == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * i / (count - 1);
  }
  return out;
}

std::pair<double, double> padded_extent(std::span<const SamplePoint> samples,
                                        double SamplePoint::*field, double margin) {
  auto [mn, mx] = std::minmax_element(samples.begin(), samples.end(),
                                      [&](const auto& a, const auto& b) { return a.*field < b.*field; });
  const double lo = (*mn).*field, hi = (*mx).*field;
  const double pad = hi > lo ? margin * (hi - lo) : 0.5;
  return {lo - pad, hi + pad};
}

double cross(PlanePoint o, PlanePoint a, PlanePoint b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

}  // namespace

std::vector<PlanePoint> convex_hull(std::vector<PlanePoint> pts) {
  std::sort(pts.begin(), pts.end(),
            [](auto a, auto b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](auto a, auto b) { return a.x == b.x && a.y == b.y; }),
            pts.end());
  if (pts.size() < 3) return pts;
  std::vector<PlanePoint> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

bool inside_hull(std::span<const PlanePoint> hull, PlanePoint p, double eps) {
  if (hull.empty()) return false;
  if (hull.size() == 1) return std::hypot(p.x - hull[0].x, p.y - hull[0].y) <= eps;
  if (hull.size() == 2) {
    const PlanePoint a = hull[0], b = hull[1];
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    if (std::abs(cross(a, b, p)) > eps * len) return false;
    const double t = ((p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y)) / (len * len);
    return t >= -eps && t <= 1.0 + eps;
  }
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const PlanePoint a = hull[i], b = hull[(i + 1) % hull.size()];
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    if (cross(a, b, p) < -eps * len) return false;
  }
  return true;
}

PlanningPlane build_plane(std::span<const SamplePoint> input, const PlaneOptions& options) {
  if (input.size() < kMinPlaneSamples) {
    throw Error(ErrorCode::insufficient_data,
                "planning plane needs at least " + std::to_string(kMinPlaneSamples) +
                    " samples, got " + std::to_string(input.size()));
  }
  if (options.nx < 2 || options.ny < 2) {
    throw Error(ErrorCode::invalid_argument, "grid must be at least 2x2");
  }
  for (const auto& s : input) {
    if (!std::isfinite(s.x) || !std::isfinite(s.y) || !std::isfinite(s.z)) {
      throw Error(ErrorCode::invalid_argument, "plane samples must be finite");
    }
  }

  PlanningPlane plane;
  plane.nx = options.nx;
  plane.ny = options.ny;
  plane.samples = merge_duplicate_locations(input);
  if (plane.samples.size() < 4) {
    throw Error(ErrorCode::insufficient_data, "too few distinct sample locations for a plane");
  }
  plane.x_scale = fit_scale(plane.samples, &SamplePoint::x);
  plane.y_scale = fit_scale(plane.samples, &SamplePoint::y);

  std::vector<SamplePoint> standard;
  std::vector<PlanePoint> hull_points;
  for (const auto& s : plane.samples) {
    standard.push_back({plane.x_scale.to_standard(s.x), plane.y_scale.to_standard(s.y), s.z});
    hull_points.push_back({standard.back().x, standard.back().y});
  }
  plane.hull = convex_hull(hull_points);

  double zmean = 0.0;
  for (const auto& s : standard) zmean += s.z;
  zmean /= static_cast<double>(standard.size());
  double zvar = 0.0;
  for (const auto& s : standard) zvar += (s.z - zmean) * (s.z - zmean);
  zvar /= static_cast<double>(standard.size());

  plane.empirical = empirical_variogram(standard, options.lag_bins);
  VariogramFit fit;
  if (options.fixed_variogram) {
    options.fixed_variogram->validate();
    fit.model = *options.fixed_variogram;
  } else {
    fit = fit_variogram(plane.empirical, options.kind, zvar);
  }
  plane.variogram = fit.model;
  plane.variogram_fallback = fit.fallback;
  plane.variogram_warning = fit.warning;
  plane.kriging = std::make_shared<const OrdinaryKriging>(standard, plane.variogram);

  auto [xlo, xhi] = padded_extent(standard, &SamplePoint::x, options.margin);
  auto [ylo, yhi] = padded_extent(standard, &SamplePoint::y, options.margin);
  plane.x_axis = axis(xlo, xhi, options.nx);
  plane.y_axis = axis(ylo, yhi, options.ny);

  const auto cells = static_cast<std::size_t>(options.nx) * static_cast<std::size_t>(options.ny);
  plane.grid.assign(cells, 0.0);
  plane.variance.assign(cells, 0.0);
  const OrdinaryKriging& ok = *plane.kriging;
  auto fill_rows = [&](int row_begin, int row_end) {
    for (int iy = row_begin; iy < row_end; ++iy) {
      for (int ix = 0; ix < options.nx; ++ix) {
        const auto est = ok.estimate(plane.x_axis[ix], plane.y_axis[iy]);
        const auto idx = static_cast<std::size_t>(iy) * options.nx + ix;
        plane.grid[idx] = est.estimate;
        plane.variance[idx] = est.variance;
      }
    }
  };
  const int workers =
      std::clamp(static_cast<int>(std::thread::hardware_concurrency()), 1, options.ny);
  if (workers == 1) {
    fill_rows(0, options.ny);
  } else {
    std::vector<std::jthread> pool;
    const int chunk = (options.ny + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const int b = w * chunk, e = std::min(options.ny, b + chunk);
      if (b < e) pool.emplace_back(fill_rows, b, e);
    }
  }
  for (double v : plane.grid) {
    if (!std::isfinite(v)) throw Error(ErrorCode::singular_system, "non-finite grid estimate");
  }

  // Leave-one-out with the variogram held fixed.
  const std::size_t n = standard.size();
  double sq = 0.0, bias = 0.0, zmin = standard[0].z, zmax = standard[0].z;
  std::vector<SamplePoint> rest;
  for (std::size_t i = 0; i < n; ++i) {
    rest.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) rest.push_back(standard[j]);
    }
    const auto est = OrdinaryKriging(rest, plane.variogram).estimate(standard[i].x, standard[i].y);
    const double err = est.estimate - standard[i].z;
    sq += err * err;
    bias += err;
    plane.cv.max_abs_error = std::max(plane.cv.max_abs_error, std::abs(err));
    zmin = std::min(zmin, standard[i].z);
    zmax = std::max(zmax, standard[i].z);
  }
  plane.cv.n = n;
  plane.cv.rmse = std::sqrt(sq / static_cast<double>(n));
  plane.cv.bias = bias / static_cast<double>(n);
  plane.cv.z_range = zmax - zmin;
  return plane;
}

LocateResult locate(const PlanningPlane& plane, double x, double y) {
  if (!std::isfinite(x) || !std::isfinite(y)) {
    throw Error(ErrorCode::non_finite_query, "plane query must be finite");
  }
  if (!plane.kriging) throw Error(ErrorCode::invalid_argument, "plane has not been built");
  const PlanePoint q{plane.x_scale.to_standard(x), plane.y_scale.to_standard(y)};
  const auto est = plane.kriging->estimate(q.x, q.y);
  return LocateResult{est.estimate, est.variance, inside_hull(plane.hull, q)};
}

}  // namespace urbscale
