#include <gtest/gtest.h>

#include "oracles.hpp"
#include "urbscale/error.hpp"
#include "urbscale/numfmt.hpp"
#include "urbscale/serialize.hpp"

namespace urbscale {
namespace {

TEST(NumFmt, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(-0.0), "0");
  EXPECT_EQ(format_double(1e300), "1e+300");
  for (double v : {1.0 / 3.0, 2.0 / 7.0, 12345.678901234567, 5e-324}) {
    EXPECT_EQ(parse_double(format_double(v)), v);
  }
  EXPECT_FALSE(parse_double("nan").has_value());
  EXPECT_FALSE(parse_double("1.0x").has_value());
  EXPECT_FALSE(parse_double("").has_value());
  EXPECT_EQ(parse_int64("+42"), 42);
  EXPECT_FALSE(parse_int64("4.2").has_value());
}

TEST(DeltaJson, RoundTrip) {
  ScenarioDelta d;
  d.added_blocks = {{"n1", 1.5, 200}};
  d.modified = {{"b7", 0}};
  d.removed = {"b3", "b4"};
  const auto text = to_json(d).dump();
  EXPECT_EQ(parse_scenario_delta(text), d);
}

TEST(DeltaJson, MissingSectionsAreEmpty) {
  auto d = parse_scenario_delta(R"({"removed":["x"]})");
  EXPECT_TRUE(d.added_blocks.empty());
  EXPECT_EQ(d.removed, std::vector<std::string>{"x"});
}

TEST(DeltaJson, StrictParsing) {
  for (const char* bad : {
           "not json",
           "[]",
           R"({"unknown":1})",
           R"({"removed":"x"})",
           R"({"modified":[{"block_id":"a","population":1.5}]})",
           R"({"modified":[{"block_id":"a"}]})",
           R"({"added_blocks":[{"block_id":"a","area_km2":"1","population":1}]})",
           R"({"added_blocks":[{"block_id":"a","area_km2":1,"population":1,"extra":0}]})",
       }) {
    try {
      parse_scenario_delta(bad);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::malformed_document) << bad;
    }
  }
}

TEST(IndicatorJson, FieldOrderAndValues) {
  auto ind = city_indicator(testing::power_law_city(1.3), 10);
  auto j = to_json(ind);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys.front(), "scaling");
  EXPECT_DOUBLE_EQ(j["scaling"]["ds"].get<double>(), ind.scaling.ds);
  EXPECT_EQ(j["scaling"]["points"].size(), ind.scaling.points.size());
  EXPECT_EQ(to_json(ind).dump(), j.dump());
}

TEST(PlaneJson, Shape) {
  std::vector<SamplePoint> s;
  for (int i = 0; i < 12; ++i) s.push_back({1.0 * (i % 4), 1.0 * (i / 4), 1.0 * i});
  auto plane = build_plane(s, PlaneOptions{.nx = 6, .ny = 4});
  auto j = to_json(plane);
  EXPECT_EQ(j["version"], kSchemaVersion);
  ASSERT_EQ(j["grid"].size(), 4u);
  EXPECT_EQ(j["grid"][0].size(), 6u);
  EXPECT_EQ(j["x_axis"].size(), 6u);
  EXPECT_DOUBLE_EQ(j["x_axis"][0].get<double>(), plane.raw_x(0));
  EXPECT_EQ(j["samples"].size(), 12u);
  EXPECT_EQ(j["variogram"]["kind"], "exponential");
}

}  // namespace
}  // namespace urbscale
