#include "urbscale/cluster1d.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "urbscale/error.hpp"

namespace urbscale {
namespace {

void check_input(std::span<const double> values, int k, std::span<const double> weights) {
  if (values.empty()) throw Error(ErrorCode::invalid_argument, "no values to cluster");
  if (k < 1) throw Error(ErrorCode::infeasible, "k must be at least 1");
  if (!weights.empty() && weights.size() != values.size()) {
    throw Error(ErrorCode::invalid_argument, "weights must match values in length");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) throw Error(ErrorCode::invalid_argument, "non-finite value");
    if (i > 0 && values[i] < values[i - 1]) {
      throw Error(ErrorCode::invalid_argument, "values must be sorted ascending");
    }
    if (!weights.empty() && !(weights[i] > 0.0 && std::isfinite(weights[i]))) {
      throw Error(ErrorCode::invalid_argument, "weights must be positive and finite");
    }
  }
}

double weight_at(std::span<const double> weights, std::size_t i) {
  return weights.empty() ? 1.0 : weights[i];
}

// Distinct values with their summed weights and the raw index where each run starts.
struct Runs {
  std::vector<double> value;
  std::vector<double> weight;
  std::vector<std::size_t> start;  // size m + 1
};

Runs compress(std::span<const double> values, std::span<const double> weights) {
  Runs runs;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i == 0 || values[i] != values[i - 1]) {
      runs.value.push_back(values[i]);
      runs.weight.push_back(0.0);
      runs.start.push_back(i);
    }
    runs.weight.back() += weight_at(weights, i);
  }
  runs.start.push_back(values.size());
  return runs;
}

// Interval cost over distinct-value indices [i, j) from centered prefix sums.
class IntervalCost {
 public:
  explicit IntervalCost(const Runs& runs) {
    const std::size_t m = runs.value.size();
    double total_w = 0.0, total_wx = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      total_w += runs.weight[i];
      total_wx += runs.weight[i] * runs.value[i];
    }
    const double shift = total_wx / total_w;
    w_.assign(m + 1, 0.0);
    x_.assign(m + 1, 0.0);
    xx_.assign(m + 1, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      const double d = runs.value[i] - shift;
      w_[i + 1] = w_[i] + runs.weight[i];
      x_[i + 1] = x_[i] + runs.weight[i] * d;
      xx_[i + 1] = xx_[i] + runs.weight[i] * d * d;
    }
  }

  double operator()(std::size_t i, std::size_t j) const noexcept {
    const double w = w_[j] - w_[i];
    const double s = x_[j] - x_[i];
    const double q = xx_[j] - xx_[i];
    return std::max(0.0, q - s * s / w);
  }

 private:
  std::vector<double> w_, x_, xx_;
};

// One layer of the suffix recurrence
//   next[i] = min_{j in (i, last]} cost(i, j) + prev[j]
// solved by divide and conquer on the monotone leftmost argmin.
struct LayerSolver {
  const IntervalCost& cost;
  const std::vector<double>& prev;
  std::vector<double>& next;
  std::vector<std::uint32_t>& opt;
  std::size_t last;  // largest admissible split index

  void solve(std::ptrdiff_t lo, std::ptrdiff_t hi, std::size_t opt_lo, std::size_t opt_hi) {
    while (lo <= hi) {
      const std::ptrdiff_t mid = lo + (hi - lo) / 2;
      const auto i = static_cast<std::size_t>(mid);
      std::size_t best_j = std::max(opt_lo, i + 1);
      const std::size_t end = std::min(opt_hi, last);
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = best_j; j <= end; ++j) {
        const double v = cost(i, j) + prev[j];
        if (v < best) {
          best = v;
          best_j = j;
        }
      }
      next[i] = best;
      opt[i] = static_cast<std::uint32_t>(best_j);
      // Recurse into the smaller side, loop on the other.
      if (mid - lo < hi - mid) {
        solve(lo, mid - 1, opt_lo, best_j);
        lo = mid + 1;
        opt_lo = best_j;
      } else {
        solve(mid + 1, hi, best_j, opt_hi);
        hi = mid - 1;
        opt_hi = best_j;
      }
    }
  }
};

}  // namespace

std::size_t count_distinct_sorted(std::span<const double> sorted_values) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < sorted_values.size(); ++i) {
    if (i == 0 || sorted_values[i] != sorted_values[i - 1]) ++count;
  }
  return count;
}

Classing classing_from_starts(std::span<const double> values, std::vector<std::size_t> starts,
                              std::span<const double> weights) {
  const std::size_t k = starts.size() - 1;
  Classing out;
  out.starts = std::move(starts);
  out.assignments.resize(values.size());
  out.centroids.resize(k);
  out.boundaries.resize(k + 1);
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t b = out.starts[j], e = out.starts[j + 1];
    if (b >= e) throw Error(ErrorCode::infeasible, "empty class " + std::to_string(j));
    double w = 0.0, wx = 0.0;
    for (std::size_t i = b; i < e; ++i) {
      out.assignments[i] = static_cast<int>(j);
      w += weight_at(weights, i);
      wx += weight_at(weights, i) * values[i];
    }
    const double mean = wx / w;
    out.centroids[j] = mean;
    double ss = 0.0;
    for (std::size_t i = b; i < e; ++i) {
      const double d = values[i] - mean;
      ss += weight_at(weights, i) * d * d;
    }
    out.within_ss += ss;
    out.boundaries[j] = values[b];
  }
  out.boundaries[k] =
      std::nextafter(values.back(), std::numeric_limits<double>::infinity());
  return out;
}

Classing kmeans_1d_exact(std::span<const double> values, int k, std::span<const double> weights) {
  check_input(values, k, weights);
  const Runs runs = compress(values, weights);
  const std::size_t m = runs.value.size();
  const auto kk = static_cast<std::size_t>(k);
  if (kk > m) {
    throw Error(ErrorCode::infeasible, "k = " + std::to_string(k) + " exceeds the " +
                                           std::to_string(m) + " distinct values");
  }
  if (m > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::invalid_argument, "too many distinct values");
  }

  const IntervalCost cost(runs);
  std::vector<std::size_t> cuts{0};
  if (kk > 1) {
    // layer t holds the best cost of splitting suffix [i, m) into t classes.
    std::vector<double> prev(m + 1, std::numeric_limits<double>::infinity());
    std::vector<double> next(m + 1, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < m; ++i) prev[i] = cost(i, m);
    std::vector<std::vector<std::uint32_t>> opt(kk + 1);
    for (std::size_t t = 2; t < kk; ++t) {
      opt[t].assign(m, 0);
      std::fill(next.begin(), next.end(), std::numeric_limits<double>::infinity());
      const std::size_t last_i = m - t;
      LayerSolver solver{cost, prev, next, opt[t], m - t + 1};
      solver.solve(0, static_cast<std::ptrdiff_t>(last_i), 1, m - t + 1);
      std::swap(prev, next);
    }
    // Top layer: only the full range starting at 0 is needed.
    {
      double best = std::numeric_limits<double>::infinity();
      std::size_t best_j = 1;
      for (std::size_t j = 1; j <= m - kk + 1; ++j) {
        const double v = cost(0, j) + prev[j];
        if (v < best) {
          best = v;
          best_j = j;
        }
      }
      cuts.push_back(best_j);
    }
    for (std::size_t t = kk - 1; t >= 2; --t) cuts.push_back(opt[t][cuts.back()]);
  }
  cuts.push_back(m);

  std::vector<std::size_t> starts;
  starts.reserve(cuts.size());
  for (auto c : cuts) starts.push_back(runs.start[c]);
  return classing_from_starts(values, std::move(starts), weights);
}

std::vector<double> quantile_seeds(std::span<const double> values, int k) {
  const std::size_t n = values.size();
  const auto kk = static_cast<std::size_t>(k);
  std::vector<double> seeds(kk);
  for (std::size_t i = 0; i < kk; ++i) {
    // 1-based rank ceil((i + 0.5) * n / k) in integer arithmetic.
    std::size_t rank = ((2 * i + 1) * n + 2 * kk - 1) / (2 * kk);
    rank = std::clamp<std::size_t>(rank, 1, n);
    seeds[i] = values[rank - 1];
  }
  return seeds;
}

Classing kmeans_1d_lloyd(std::span<const double> values, int k, std::span<const double> weights) {
  check_input(values, k, weights);
  const std::size_t distinct = count_distinct_sorted(values);
  if (static_cast<std::size_t>(k) > distinct) {
    throw Error(ErrorCode::infeasible, "k = " + std::to_string(k) + " exceeds the " +
                                           std::to_string(distinct) + " distinct values");
  }
  auto seeds = quantile_seeds(values, k);
  return kmeans_1d_lloyd_from(values, seeds, weights);
}

Classing kmeans_1d_lloyd_from(std::span<const double> values,
                              std::span<const double> initial_centroids,
                              std::span<const double> weights) {
  const int k = static_cast<int>(initial_centroids.size());
  check_input(values, k, weights);
  std::vector<double> centroids(initial_centroids.begin(), initial_centroids.end());
  std::sort(centroids.begin(), centroids.end());
  const std::size_t n = values.size();

  auto assign = [&](std::vector<int>& out) {
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      for (std::size_t c = 1; c < centroids.size(); ++c) {
        if (std::abs(values[i] - centroids[c]) < std::abs(values[i] - centroids[best])) best = c;
      }
      out[i] = static_cast<int>(best);
    }
  };

  std::vector<int> labels(n), next(n);
  assign(labels);
  int iterations = 0;
  for (;;) {
    if (iterations >= kLloydIterationCap) {
      throw Error(ErrorCode::non_convergence,
                  "Lloyd iteration did not converge within " +
                      std::to_string(kLloydIterationCap) + " updates");
    }
    std::vector<double> w(centroids.size(), 0.0), wx(centroids.size(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      w[labels[i]] += weight_at(weights, i);
      wx[labels[i]] += weight_at(weights, i) * values[i];
    }
    for (std::size_t j = 0; j < centroids.size(); ++j) {
      if (w[j] > 0.0) centroids[j] = wx[j] / w[j];  // empty classes keep their centroid
    }
    std::sort(centroids.begin(), centroids.end());
    ++iterations;
    assign(next);
    if (next == labels) break;
    labels.swap(next);
  }

  std::vector<std::size_t> starts(centroids.size() + 1, 0);
  for (std::size_t j = 0, i = 0; j < centroids.size(); ++j) {
    starts[j] = i;
    while (i < n && labels[i] == static_cast<int>(j)) ++i;
    starts[j + 1] = i;
  }
  if (starts.back() != n) throw Error(ErrorCode::infeasible, "non-contiguous Lloyd assignment");
  Classing out = classing_from_starts(values, std::move(starts), weights);
  out.iterations = iterations;
  return out;
}

}  // namespace urbscale
