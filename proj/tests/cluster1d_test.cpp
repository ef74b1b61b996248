#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "urbscale/cluster1d.hpp"
#include "urbscale/error.hpp"

namespace urbscale {
namespace {

void expect_well_formed(const std::vector<double>& v, const Classing& c) {
  const auto k = static_cast<std::size_t>(c.classes());
  ASSERT_EQ(c.boundaries.size(), k + 1);
  ASSERT_EQ(c.starts.size(), k + 1);
  ASSERT_EQ(c.assignments.size(), v.size());
  EXPECT_EQ(c.starts.front(), 0u);
  EXPECT_EQ(c.starts.back(), v.size());
  for (std::size_t j = 0; j < k; ++j) EXPECT_LT(c.boundaries[j], c.boundaries[j + 1]);
  for (std::size_t i = 1; i < v.size(); ++i) EXPECT_LE(c.assignments[i - 1], c.assignments[i]);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto j = static_cast<std::size_t>(c.assignments[i]);
    EXPECT_GE(v[i], c.boundaries[j]);
    EXPECT_LT(v[i], c.boundaries[j + 1]);
  }
  EXPECT_NEAR(c.within_ss, testing::direct_within_ss(v, c.starts), 1e-12 * (1.0 + c.within_ss));
}

std::vector<double> random_sorted(std::mt19937_64& rng, std::size_t n, bool integers) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> small(0, 6);
  std::vector<double> v(n);
  for (auto& x : v) x = integers ? small(rng) : u(rng);
  std::sort(v.begin(), v.end());
  return v;
}

TEST(KMeansExact, TwoSeparatedPairs) {
  const std::vector<double> v{1, 2, 10, 11};
  auto c = kmeans_1d_exact(v, 2);
  EXPECT_EQ(c.starts, (std::vector<std::size_t>{0, 2, 4}));
  EXPECT_DOUBLE_EQ(c.within_ss, 1.0);
  EXPECT_EQ(testing::brute_force_kmeans(v, 2).starts, c.starts);
  expect_well_formed(v, c);
}

TEST(KMeansExact, SingleClassIsMean) {
  const std::vector<double> v{0.5, 1.5, 2.0, 9.0};
  auto c = kmeans_1d_exact(v, 1);
  ASSERT_EQ(c.classes(), 1);
  EXPECT_DOUBLE_EQ(c.centroids[0], 13.0 / 4.0);
}

TEST(KMeansExact, SingletonsHaveZeroCost) {
  auto c = kmeans_1d_exact(std::vector<double>{3, 7}, 2);
  EXPECT_EQ(c.within_ss, 0.0);
}

TEST(KMeansExact, Infeasible) {
  try {
    kmeans_1d_exact(std::vector<double>{1, 1, 1}, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::infeasible);
  }
  EXPECT_THROW(kmeans_1d_exact(std::vector<double>{1, 2}, 0), Error);
  EXPECT_THROW(kmeans_1d_exact(std::vector<double>{2, 1}, 1), Error);
  EXPECT_THROW(kmeans_1d_exact(std::vector<double>{}, 1), Error);
}

TEST(KMeansExact, TiesBreakTowardSmallestBoundaries) {
  // {0},{1,2} and {0,1},{2} cost the same.
  auto c = kmeans_1d_exact(std::vector<double>{0, 1, 2}, 2);
  EXPECT_EQ(c.starts, (std::vector<std::size_t>{0, 1, 3}));
  EXPECT_DOUBLE_EQ(c.within_ss, 0.5);
}

TEST(KMeansExact, MatchesExhaustiveEnumeration) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> nd(1, 12), kd(1, 4);
  for (int trial = 0; trial < 300; ++trial) {
    const bool integers = trial % 3 == 0;
    auto v = random_sorted(rng, static_cast<std::size_t>(nd(rng)), integers);
    const int k = std::min<int>(kd(rng), static_cast<int>(count_distinct_sorted(v)));
    auto c = kmeans_1d_exact(v, k);
    auto brute = testing::brute_force_kmeans(v, k);
    EXPECT_NEAR(c.within_ss, brute.within_ss, 1e-12) << "trial " << trial;
    expect_well_formed(v, c);
  }
}

TEST(KMeansExact, DuplicatesShareAClass) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    auto v = random_sorted(rng, 40, true);
    const int k = std::min<int>(4, static_cast<int>(count_distinct_sorted(v)));
    auto c = kmeans_1d_exact(v, k);
    for (std::size_t i = 1; i < v.size(); ++i) {
      if (v[i] == v[i - 1]) EXPECT_EQ(c.assignments[i], c.assignments[i - 1]);
    }
  }
}

TEST(KMeansExact, AffineInvariance) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    auto v = random_sorted(rng, 200, false);
    std::vector<double> w(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) w[i] = 3.5 * v[i] + 100.0;
    EXPECT_EQ(kmeans_1d_exact(v, 6).starts, kmeans_1d_exact(w, 6).starts);
  }
}

TEST(KMeansExact, IntegerWeightsEqualDuplication) {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> wd(1, 4);
  for (int trial = 0; trial < 50; ++trial) {
    auto v = random_sorted(rng, 30, false);
    std::vector<double> weights, expanded;
    for (double x : v) {
      const int w = wd(rng);
      weights.push_back(w);
      for (int r = 0; r < w; ++r) expanded.push_back(x);
    }
    auto weighted = kmeans_1d_exact(v, 5, weights);
    auto plain = kmeans_1d_exact(expanded, 5);
    EXPECT_NEAR(weighted.within_ss, plain.within_ss, 1e-12);
    EXPECT_EQ(weighted.boundaries, plain.boundaries);
  }
}

TEST(KMeansExact, DominatesLloyd) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    auto v = random_sorted(rng, 60, trial % 2 == 0);
    const int k = std::min<int>(5, static_cast<int>(count_distinct_sorted(v)));
    double lloyd_ss;
    try {
      lloyd_ss = kmeans_1d_lloyd(v, k).within_ss;
    } catch (const Error&) {
      continue;  // quantile seeds on heavy duplicates can empty a class
    }
    EXPECT_LE(kmeans_1d_exact(v, k).within_ss, lloyd_ss + 1e-12);
  }
}

TEST(KMeansExact, LargeInputIsWellFormed) {
  std::mt19937_64 rng(1);
  std::lognormal_distribution<double> d(6.0, 1.0);
  std::vector<double> v(100'000);
  for (auto& x : v) x = d(rng);
  std::sort(v.begin(), v.end());
  auto c = kmeans_1d_exact(v, 10);
  expect_well_formed(v, c);
  // A single boundary step either way must not improve the objective.
  for (std::size_t j = 1; j < 10; ++j) {
    for (int step : {-1, 1}) {
      auto s = c.starts;
      s[j] = static_cast<std::size_t>(static_cast<long>(s[j]) + step);
      if (s[j] <= s[j - 1] || s[j] >= s[j + 1]) continue;
      EXPECT_GE(testing::direct_within_ss(v, s), c.within_ss * (1 - 1e-12));
    }
  }
}

TEST(KMeansLloyd, QuantileSeeds) {
  const std::vector<double> v{1, 2, 10, 11};
  EXPECT_EQ(quantile_seeds(v, 2), (std::vector<double>{1, 10}));
}

TEST(KMeansLloyd, MatchesExactOnSeparatedPairs) {
  const std::vector<double> v{1, 2, 10, 11};
  EXPECT_EQ(kmeans_1d_lloyd(v, 2).starts, kmeans_1d_exact(v, 2).starts);
}

TEST(KMeansLloyd, SingleClassEqualsExact) {
  const std::vector<double> v{0.1, 0.4, 0.45, 3.0, 8.0};
  auto a = kmeans_1d_lloyd(v, 1);
  auto b = kmeans_1d_exact(v, 1);
  EXPECT_EQ(a.starts, b.starts);
  EXPECT_EQ(a.centroids, b.centroids);
  EXPECT_EQ(a.within_ss, b.within_ss);
}

TEST(KMeansLloyd, FixedPointTakesOneIteration) {
  const std::vector<double> v{1, 2, 10, 11};
  auto first = kmeans_1d_lloyd(v, 2);
  auto again = kmeans_1d_lloyd_from(v, first.centroids);
  EXPECT_EQ(again.iterations, 1);
  EXPECT_EQ(again.starts, first.starts);
  EXPECT_EQ(again.centroids, first.centroids);
}

TEST(KMeansLloyd, Infeasible) {
  EXPECT_THROW(kmeans_1d_lloyd(std::vector<double>{1, 1}, 2), Error);
}

}  // namespace
}  // namespace urbscale
