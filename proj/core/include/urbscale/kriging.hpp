#pragma once

#include <memory>
#include <span>
#include <vector>

#include "urbscale/variogram.hpp"

namespace urbscale {

/// Most negative kriging variance, in units of nugget + sill, accepted as
/// rounding; it is reported as zero.
inline constexpr double kVarianceFloor = -1e-12;

struct KrigingEstimate {
  double estimate = 0.0;
  double variance = 0.0;
};

struct KrigingSolution {
  std::vector<double> weights;  // one per (merged) sample
  double lagrange = 0.0;
  double estimate = 0.0;
  double variance = 0.0;
};

/// Samples sharing exact (x, y) coordinates collapse into one point with the
/// mean z. First-occurrence order is kept.
std::vector<SamplePoint> merge_duplicate_locations(std::span<const SamplePoint> samples);

/// Ordinary kriging with a factored system, reusable across queries.
///
/// The system matrix holds gamma(|s_i - s_j|) off the diagonal, zero on the
/// diagonal, and a bordering row/column of ones for the unbiasedness
/// constraint. A query at distance zero from a sample sees gamma(0) = nugget,
/// so a positive nugget smooths rather than interpolates. With a zero nugget a
/// query exactly at a sample returns that sample with unit weight.
class OrdinaryKriging {
 public:
  /// Merges duplicate locations, then factors the system.
  /// Throws Error(insufficient_data) below 3 distinct locations and
  /// Error(singular_system) if the factorization is rank deficient.
  OrdinaryKriging(std::span<const SamplePoint> samples, const VariogramModel& model);

  KrigingEstimate estimate(double x, double y) const;
  KrigingSolution solve(double x, double y) const;

  std::span<const SamplePoint> samples() const noexcept;
  const VariogramModel& model() const noexcept;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

/// One-shot ordinary kriging estimate at (x, y).
KrigingEstimate krige(std::span<const SamplePoint> samples, const VariogramModel& model, double x,
                      double y);

}  // namespace urbscale
