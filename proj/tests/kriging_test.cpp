#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "urbscale/error.hpp"
#include "urbscale/kriging.hpp"

namespace urbscale {
namespace {

std::vector<SamplePoint> random_samples(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<SamplePoint> s;
  for (int i = 0; i < n; ++i) s.push_back({u(rng), u(rng), u(rng) * 10.0});
  return s;
}

const VariogramModel kExp{VariogramKind::exponential, 0.0, 1.0, 1.0};

TEST(Krige, ExactAtSamplesWithoutNugget) {
  std::mt19937_64 rng(1);
  auto s = random_samples(rng, 15);
  OrdinaryKriging ok(s, kExp);
  for (const auto& p : s) {
    auto est = ok.estimate(p.x, p.y);
    EXPECT_NEAR(est.estimate, p.z, 1e-9);
    EXPECT_NEAR(est.variance, 0.0, 1e-9);
  }
}

TEST(Krige, PositiveNuggetSmooths) {
  std::mt19937_64 rng(2);
  auto s = random_samples(rng, 15);
  OrdinaryKriging ok(s, VariogramModel{VariogramKind::exponential, 0.5, 1.0, 1.0});
  double moved = 0.0;
  for (const auto& p : s) moved += std::abs(ok.estimate(p.x, p.y).estimate - p.z);
  EXPECT_GT(moved, 1e-3);
}

TEST(Krige, ConstantField) {
  std::mt19937_64 rng(3);
  auto s = random_samples(rng, 12);
  for (auto& p : s) p.z = 7.0;
  OrdinaryKriging ok(s, VariogramModel{VariogramKind::spherical, 0.1, 2.0, 1.5});
  for (double q : {-5.0, 0.0, 0.3, 9.0}) EXPECT_NEAR(ok.estimate(q, -q).estimate, 7.0, 1e-12);
}

TEST(Krige, ThreePointWeightsMatchDirectSolve) {
  std::vector<SamplePoint> s{{0, 0, 1}, {1, 0, 4}, {0.2, 0.9, -2}};
  const VariogramModel m{VariogramKind::exponential, 0.1, 2.0, 0.7};
  const double qx = 0.4, qy = 0.3;
  // Independent 4x4 ordinary kriging system.
  std::vector<std::vector<double>> a(4, std::vector<double>(4, 0.0));
  std::vector<double> b(4, 1.0);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      a[i][j] = i == j ? 0.0 : m(std::hypot(s[i].x - s[j].x, s[i].y - s[j].y));
    }
    a[i][3] = a[3][i] = 1.0;
    b[i] = m(std::hypot(s[i].x - qx, s[i].y - qy));
  }
  auto expected = testing::gauss_solve(a, b);
  auto sol = OrdinaryKriging(s, m).solve(qx, qy);
  double sum = 0.0;
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(sol.weights[i], expected[i], 1e-12);
    sum += sol.weights[i];
  }
  EXPECT_NEAR(sum, 1.0, 1e-12);
  EXPECT_NEAR(sol.lagrange, expected[3], 1e-12);
}

TEST(Krige, EquilateralCentroidWeighsEqually) {
  const double h = std::sqrt(3.0) / 2.0;
  std::vector<SamplePoint> s{{0, 0, 3}, {1, 0, 6}, {0.5, h, 9}};
  auto sol = OrdinaryKriging(s, kExp).solve(0.5, h / 3.0);
  for (double w : sol.weights) EXPECT_NEAR(w, 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(sol.estimate, 6.0, 1e-12);
  for (auto& p : s) p.z = 4.25;
  EXPECT_NEAR(krige(s, kExp, 0.5, h / 3.0).estimate, 4.25, 1e-12);
}

TEST(Krige, TranslationInvariance) {
  std::mt19937_64 rng(4);
  auto s = random_samples(rng, 10);
  auto shifted = s;
  for (auto& p : shifted) p.z += 123.5;
  OrdinaryKriging a(s, kExp), b(shifted, kExp);
  for (int i = 0; i < 20; ++i) {
    const double x = -3 + 0.3 * i, y = 2 - 0.2 * i;
    EXPECT_NEAR(b.estimate(x, y).estimate, a.estimate(x, y).estimate + 123.5, 1e-9);
  }
}

TEST(Krige, DuplicateLocationsAveraged) {
  std::vector<SamplePoint> s{{0, 0, 1}, {0, 0, 3}, {1, 0, 5}, {0, 1, 7}};
  OrdinaryKriging ok(s, kExp);
  EXPECT_EQ(ok.samples().size(), 3u);
  EXPECT_NEAR(ok.estimate(0, 0).estimate, 2.0, 1e-12);
}

TEST(Krige, Errors) {
  std::vector<SamplePoint> two{{0, 0, 1}, {1, 0, 2}, {0, 0, 5}};
  try {
    OrdinaryKriging(two, kExp);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::insufficient_data);
  }
  std::vector<SamplePoint> three{{0, 0, 1}, {1, 0, 2}, {0, 1, 5}};
  OrdinaryKriging ok(three, kExp);
  EXPECT_THROW(ok.estimate(std::nan(""), 0.0), Error);
  EXPECT_THROW(ok.estimate(0.0, INFINITY), Error);
  EXPECT_THROW(OrdinaryKriging(three, VariogramModel{VariogramKind::exponential, 0, 0, 1}), Error);
}

TEST(Krige, RandomConfigurationsKeepInvariants) {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> nd(3, 40);
  const VariogramKind kinds[] = {VariogramKind::exponential, VariogramKind::spherical,
                                 VariogramKind::gaussian};
  for (int trial = 0; trial < 60; ++trial) {
    auto s = random_samples(rng, nd(rng));
    const VariogramModel m{kinds[trial % 3], 0.0, 1.0 + trial % 5, 0.5 + 0.1 * (trial % 7)};
    OrdinaryKriging ok(s, m);
    for (int q = 0; q < 10; ++q) {
      auto sol = ok.solve(-2.5 + 0.5 * q, 2.5 - 0.45 * q);
      const double sum = std::accumulate(sol.weights.begin(), sol.weights.end(), 0.0);
      EXPECT_LT(std::abs(sum - 1.0), 1e-10);
      EXPECT_GE(sol.variance, 0.0);
    }
  }
}

}  // namespace
}  // namespace urbscale
