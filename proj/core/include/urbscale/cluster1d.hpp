#pragma once

// One-dimensional k-means over a sorted value spectrum.

#include <cstddef>
#include <span>
#include <vector>

namespace urbscale {

inline constexpr int kDefaultClasses = 10;
inline constexpr int kLloydIterationCap = 1000;

/// A partition of sorted values into k contiguous classes.
///
/// Class j holds the index range [starts[j], starts[j+1]) and the value range
/// [boundaries[j], boundaries[j+1]). The last upper boundary is the smallest
/// double above the maximum value, so every range is half-open.
struct Classing {
  std::vector<double> boundaries;       // k + 1, strictly increasing
  std::vector<std::size_t> starts;      // k + 1, starts[0] = 0, starts[k] = n
  std::vector<int> assignments;         // n, non-decreasing
  std::vector<double> centroids;        // k (weighted means)
  double within_ss = 0.0;
  int iterations = 0;                   // Lloyd centroid updates; 0 for the exact solver

  int classes() const noexcept { return static_cast<int>(centroids.size()); }
};

std::size_t count_distinct_sorted(std::span<const double> sorted_values);

/// Globally optimal contiguous k-partition minimizing the (weighted) within-class
/// sum of squares. Equal values always share a class. Among optimal partitions
/// the lexicographically smallest vector of class start indices is returned.
///
/// `weights` is empty for unit weights, otherwise one positive weight per value.
/// Throws Error(infeasible) when k exceeds the number of distinct values.
Classing kmeans_1d_exact(std::span<const double> sorted_values, int k,
                         std::span<const double> weights = {});

/// Lloyd iteration from quantile seeds: centroid i starts at the value of
/// 1-based rank ceil((i + 0.5) * n / k). Converges when assignments repeat;
/// throws Error(non_convergence) past kLloydIterationCap updates.
Classing kmeans_1d_lloyd(std::span<const double> sorted_values, int k,
                         std::span<const double> weights = {});

/// Lloyd iteration from caller-provided ascending centroids.
Classing kmeans_1d_lloyd_from(std::span<const double> sorted_values,
                              std::span<const double> initial_centroids,
                              std::span<const double> weights = {});

std::vector<double> quantile_seeds(std::span<const double> sorted_values, int k);

/// Builds a Classing (boundaries, assignments, centroids, exact within_ss) from
/// class start offsets over sorted values.
Classing classing_from_starts(std::span<const double> sorted_values,
                              std::vector<std::size_t> starts,
                              std::span<const double> weights = {});

}  // namespace urbscale
