#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace urbscale {

/// A sample of the planning plane: x = mean density, y = ds, z = dependent value.
struct SamplePoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  bool operator==(const SamplePoint&) const = default;
};

enum class VariogramKind { exponential, spherical, gaussian };

std::string_view variogram_name(VariogramKind kind) noexcept;
std::optional<VariogramKind> parse_variogram(std::string_view name) noexcept;

/// Isotropic variogram gamma(h) = nugget + sill * f(h / range), where
///   exponential: f(u) = 1 - exp(-u)
///   spherical:   f(u) = 1.5u - 0.5u^3 for u < 1, else 1
///   gaussian:    f(u) = 1 - exp(-u^2)
/// `sill` is the structured part above the nugget; gamma(0) evaluates to the nugget.
struct VariogramModel {
  VariogramKind kind = VariogramKind::exponential;
  double nugget = 0.0;
  double sill = 1.0;
  double range = 1.0;

  double operator()(double h) const noexcept;
  /// Throws Error(invalid_argument) unless nugget >= 0, sill > 0, range > 0.
  void validate() const;

  bool operator==(const VariogramModel&) const = default;
};

struct LagBin {
  double lag = 0.0;  // mean pair distance in the bin
  double semivariance = 0.0;
  std::size_t pair_count = 0;
};

/// Matheron estimator over `n_bins` equal-width lag classes on [0, max_lag].
/// Distances beyond max_lag are ignored; by default max_lag is the largest
/// pair distance. Empty bins are omitted. Requires at least 2 samples.
std::vector<LagBin> empirical_variogram(std::span<const SamplePoint> samples, int n_bins,
                                        std::optional<double> max_lag = std::nullopt);

struct VariogramFit {
  VariogramModel model;
  bool fallback = false;
  std::string warning;
  double weighted_sse = 0.0;
};

/// Pair-count weighted least squares for (nugget, sill, range): a log-spaced
/// grid over range with closed-form non-negative (nugget, sill) at each range,
/// refined by golden-section search. Fewer than 3 bins, a flat variogram or no
/// admissible fit yields the fallback (nugget 0, sill = sample variance,
/// range = half the largest lag) with `fallback` set.
///
/// A NaN `sample_variance` is replaced by the pair-weighted mean semivariance.
VariogramFit fit_variogram(std::span<const LagBin> bins, VariogramKind kind,
                           double sample_variance = std::numeric_limits<double>::quiet_NaN());

}  // namespace urbscale
