#pragma once

// Independent reference computations for tests. Nothing here calls into the
// library code paths it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "urbscale/census.hpp"

namespace urbscale::testing {

/// Sum of squared deviations from each class mean, computed directly.
inline double direct_within_ss(const std::vector<double>& values,
                               const std::vector<std::size_t>& starts) {
  double total = 0.0;
  for (std::size_t j = 0; j + 1 < starts.size(); ++j) {
    double mean = 0.0;
    for (std::size_t i = starts[j]; i < starts[j + 1]; ++i) mean += values[i];
    mean /= static_cast<double>(starts[j + 1] - starts[j]);
    for (std::size_t i = starts[j]; i < starts[j + 1]; ++i) {
      total += (values[i] - mean) * (values[i] - mean);
    }
  }
  return total;
}

struct BruteForcePartition {
  double within_ss = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> starts;
};

/// Exhaustive search over every contiguous k-partition of sorted values.
inline BruteForcePartition brute_force_kmeans(const std::vector<double>& values, int k) {
  const std::size_t n = values.size();
  BruteForcePartition best;
  std::vector<std::size_t> cuts(static_cast<std::size_t>(k - 1));
  for (std::size_t i = 0; i < cuts.size(); ++i) cuts[i] = i + 1;
  for (;;) {
    std::vector<std::size_t> starts{0};
    starts.insert(starts.end(), cuts.begin(), cuts.end());
    starts.push_back(n);
    const double ss = direct_within_ss(values, starts);
    if (ss < best.within_ss) {
      best.within_ss = ss;
      best.starts = starts;
    }
    // Next combination of k-1 cut positions from {1..n-1}.
    int pos = static_cast<int>(cuts.size()) - 1;
    while (pos >= 0 && cuts[pos] == n - cuts.size() + pos) --pos;
    if (pos < 0) break;
    ++cuts[pos];
    for (std::size_t i = pos + 1; i < cuts.size(); ++i) cuts[i] = cuts[i - 1] + 1;
  }
  return best;
}

/// Dense Gauss-Jordan with partial pivoting; returns the solution of A x = b.
inline std::vector<double> gauss_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    }
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= a[i][i];
  return b;
}

/// A city whose density classes satisfy area = scale * density^(-exponent)
/// exactly, up to rounding. Each class has `per_class` identical blocks;
/// class populations are integers.
inline CityDataset power_law_city(double exponent, int classes = 10, int per_class = 4,
                                  double scale = 1.0e4, const std::string& id = "powerlaw") {
  std::vector<Block> blocks;
  for (int j = 0; j < classes; ++j) {
    std::int64_t pop;
    double density;
    if (exponent == 1.0) {
      pop = static_cast<std::int64_t>(per_class) * 50000;
      density = std::pow(10.0, 0.5 + 0.4 * j);
    } else {
      pop = static_cast<std::int64_t>(per_class) * 1000 * (std::int64_t{1} << j);
      density = std::pow(static_cast<double>(pop) / scale, 1.0 / (1.0 - exponent));
    }
    const double area = static_cast<double>(pop) / density;
    for (int b = 0; b < per_class; ++b) {
      blocks.push_back(Block{"c" + std::to_string(j) + "b" + std::to_string(b), area / per_class,
                             pop / per_class});
    }
  }
  std::int64_t total = 0;
  for (const auto& b : blocks) total += b.population;
  return CityDataset(id, std::move(blocks), total);
}

/// Random city with log-normal densities and even populations.
inline CityDataset random_city(std::uint64_t seed, int blocks = 400, const std::string& id = "rand") {
  std::mt19937_64 rng(seed);
  std::lognormal_distribution<double> density(6.0, 1.2);
  std::uniform_real_distribution<double> area(0.01, 2.0);
  std::vector<Block> out;
  for (int i = 0; i < blocks; ++i) {
    const double a = area(rng);
    const auto p = 2 * static_cast<std::int64_t>(std::llround(density(rng) * a / 2.0));
    out.push_back(Block{"b" + std::to_string(i), a, p});
  }
  std::int64_t total = 0;
  for (const auto& b : out) total += b.population;
  return CityDataset(id, std::move(out), std::max<std::int64_t>(total, 1));
}

/// Random city whose densities fall into `groups` tight bands 100/km2 apart
/// (+-2% jitter), so the optimal unweighted classing is the band structure
/// with a wide margin.
inline CityDataset banded_city(std::uint64_t seed, int groups = 10, int per_group = 30,
                               const std::string& id = "banded") {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(0.98, 1.02);
  std::uniform_real_distribution<double> area(0.05, 1.5);
  std::vector<Block> out;
  int next = 0;
  for (int g = 0; g < groups; ++g) {
    const double base = 100.0 * (g + 1);
    for (int i = 0; i < per_group; ++i) {
      const double a = area(rng) * (1.0 + 0.3 * (groups - g));
      const auto p = 2 * static_cast<std::int64_t>(std::llround(base * jitter(rng) * a / 2.0)) + 2;
      out.push_back(Block{"b" + std::to_string(next++), a, p});
    }
  }
  std::int64_t total = 0;
  for (const auto& b : out) total += b.population;
  return CityDataset(id, std::move(out), total);
}

}  // namespace urbscale::testing
