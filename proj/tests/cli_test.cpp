#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "urbscale/serialize.hpp"
#include "urbscale_app/commands.hpp"

namespace urbscale::app {
namespace {

namespace fs = std::filesystem;

const fs::path kFixtures = URBSCALE_FIXTURE_DIR;

struct TempDir {
  fs::path path;
  TempDir() {
    std::string tmpl = (fs::temp_directory_path() / "urbscale-cli-XXXXXX").string();
    path = ::mkdtemp(tmpl.data());
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> fixture_args(const std::string& cmd, const fs::path& out) {
  return {cmd,
          "--blocks-dir", (kFixtures / "cities").string(),
          "--observables", (kFixtures / "observables.csv").string(),
          "--out", out.string()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

// Writes cities plus an observables file where gas per area is `gas(i)`.
struct SyntheticSet {
  TempDir dir;
  fs::path blocks() const { return dir.path / "cities"; }
  fs::path observables() const { return dir.path / "observables.csv"; }
  std::vector<std::string> args(const std::string& cmd) const {
    return {cmd, "--blocks-dir", blocks().string(), "--observables", observables().string(),
            "--out", (dir.path / "out").string()};
  }
};

void write_set(SyntheticSet& set, const std::vector<CityDataset>& cities,
               const std::vector<double>& gas_per_area) {
  std::vector<ObservablesRow> rows;
  for (std::size_t i = 0; i < cities.size(); ++i) {
    const auto& c = cities[i];
    spit(set.blocks() / (c.city_id() + ".csv"), serialize_blocks(c.blocks()));
    ObservablesRow r;
    r.city_id = c.city_id();
    r.reported_population = c.total_population();
    r.observables.gas_sales_2007 = gas_per_area[i] * c.total_area();
    r.observables.payroll_2007 = 100.0;
    r.observables.payroll_2010 = 100.0;
    r.observables.co2_road_per_capita = 1.0 + static_cast<double>(i);
    rows.push_back(r);
  }
  spit(set.observables(), serialize_observables(rows));
}

TEST(CliIndicator, FixtureTable) {
  TempDir out;
  auto r = run(fixture_args("indicator", out.path));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  const auto rows = lines(slurp(out.path / "indicators.csv"));
  ASSERT_EQ(rows.size(), 18u);
  int included = 0;
  for (const auto& row : rows) {
    if (row.rfind("mismatch,", 0) == 0) EXPECT_NE(row.find("excluded_population_mismatch"), std::string::npos);
    if (row.rfind("noenergy,", 0) == 0) EXPECT_NE(row.find("excluded_missing_energy"), std::string::npos);
    if (row.rfind("uniform,", 0) == 0) EXPECT_NE(row.find("degenerate-spectrum"), std::string::npos);
    if (row.find(",included,,") != std::string::npos) ++included;
  }
  EXPECT_EQ(included, 14);
  auto doc = Json::parse(slurp(out.path / "indicators.json"));
  EXPECT_EQ(doc["cities"].size(), 17u);
}

TEST(CliIndicator, KnownScalingIndicators) {
  SyntheticSet set;
  const double ds[] = {0.5, 1.0, 1.7};
  std::vector<CityDataset> cities;
  for (int i = 0; i < 3; ++i) {
    cities.push_back(testing::power_law_city(ds[i], 10, 3, 1e4, "pl" + std::to_string(i)));
  }
  write_set(set, cities, {1.0, 2.0, 3.0});
  auto r = run(set.args("indicator"));
  ASSERT_EQ(r.code, 0) << r.err;
  auto doc = Json::parse(slurp(set.dir.path / "out" / "indicators.json"));
  ASSERT_EQ(doc["cities"].size(), 3u);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(doc["cities"][i]["indicator"]["scaling"]["ds"].get<double>(), ds[i], 1e-9);
  }
}

TEST(CliIndicator, InputErrors) {
  TempDir empty;
  spit(empty.path / "obs.csv", "city_id,reported_population,gas_sales_2007_usd,payroll_2007_usd,"
                               "payroll_2010_usd,co2_road_tpc\n");
  fs::create_directories(empty.path / "cities");
  const auto obs = (empty.path / "obs.csv").string();
  EXPECT_EQ(run({"indicator", "--blocks-dir", (empty.path / "cities").string(), "--observables",
                 obs, "--out", (empty.path / "o").string()})
                .code,
            1);
  EXPECT_EQ(run({"indicator", "--blocks-dir", (empty.path / "nope").string(), "--observables",
                 obs, "--out", (empty.path / "o").string()})
                .code,
            1);
  EXPECT_EQ(run({"indicator", "--blocks-dir", (kFixtures / "cities").string(), "--observables",
                 (empty.path / "missing.csv").string(), "--out", (empty.path / "o").string()})
                .code,
            1);
  EXPECT_EQ(run({"indicator", "--blocks-dir", (kFixtures / "cities").string(), "--observables",
                 (kFixtures / "observables.csv").string()})
                .code,
            1);
  EXPECT_EQ(run({"bogus"}).code, 1);
  TempDir out;
  auto args = fixture_args("indicator", out.path);
  args.insert(args.end(), {"--classes", "2"});
  EXPECT_EQ(run(args).code, 1);
}

TEST(CliIndicator, FormatErrors) {
  SyntheticSet set;
  write_set(set, {testing::power_law_city(1.2, 10, 2, 1e4, "alpha")}, {1.0});
  spit(set.blocks() / "ALPHA.csv", serialize_blocks(testing::power_law_city(1.2).blocks()));
  auto dup = run(set.args("indicator"));
  EXPECT_EQ(dup.code, 2);
  EXPECT_NE(dup.err.find("duplicate"), std::string::npos);

  fs::remove(set.blocks() / "ALPHA.csv");
  spit(set.blocks() / "alpha.csv", "block_id,area_km2,population\na,1.0,10\nb,abc,3\n");
  auto bad = run(set.args("indicator"));
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("row 3"), std::string::npos) << bad.err;

  spit(set.blocks() / "alpha.csv", "block_id,area_km2,population\na,1.0,10\n");
  spit(set.blocks() / "beta.csv", "block_id,area_km2,population\na,1.0,10\n");
  auto orphan = run(set.args("indicator"));
  EXPECT_EQ(orphan.code, 2);
  EXPECT_NE(orphan.err.find("beta"), std::string::npos);
}

TEST(CliIndicator, StdoutAndDeterminism) {
  TempDir a, b;
  auto ra = run(fixture_args("indicator", a.path));
  auto args = fixture_args("indicator", b.path);
  args.insert(args.end(), {"--stdout", "--jobs", "1"});
  auto rb = run(args);
  ASSERT_EQ(ra.code, 0);
  ASSERT_EQ(rb.code, 0);
  EXPECT_EQ(rb.out, slurp(b.path / "indicators.csv"));
  for (const char* f : {"indicators.csv", "indicators.json"}) {
    EXPECT_EQ(slurp(a.path / f), slurp(b.path / f)) << f;
  }
}

TEST(CliSpectrum, GoldenSvg) {
  TempDir out;
  auto args = fixture_args("spectrum", out.path);
  args.insert(args.end(), {"--city", "alder"});
  auto r = run(args);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(out.path / "spectrum_alder.svg"), slurp(kFixtures / "golden" / "spectrum_alder.svg"));
  auto doc = Json::parse(slurp(out.path / "spectrum_alder.json"));
  ASSERT_EQ(doc["bands"].size(), 10u);
  for (std::size_t i = 1; i < 10; ++i) {
    EXPECT_LT(doc["bands"][i - 1]["density"].get<double>(), doc["bands"][i]["density"].get<double>());
  }
}

TEST(CliSpectrum, SingleClassAndUnknown) {
  TempDir out;
  auto args = fixture_args("spectrum", out.path);
  args.insert(args.end(), {"--city", "uniform"});
  ASSERT_EQ(run(args).code, 0);
  auto doc = Json::parse(slurp(out.path / "spectrum_uniform.json"));
  EXPECT_EQ(doc["bands"].size(), 1u);

  auto unknown = fixture_args("spectrum", out.path);
  unknown.insert(unknown.end(), {"--city", "atlantis"});
  EXPECT_EQ(run(unknown).code, 1);
  EXPECT_EQ(run(fixture_args("spectrum", out.path)).code, 1);
}

TEST(CliCorrelate, FixtureReport) {
  TempDir out;
  auto r = run(fixture_args("correlate", out.path));
  ASSERT_EQ(r.code, 0) << r.err;
  auto doc = Json::parse(slurp(out.path / "correlations.json"));
  ASSERT_EQ(doc["correlations"].size(), 16u);
  for (const auto& c : doc["correlations"]) {
    if (c["x"] == "ds") EXPECT_GT(c["pearson_r"].get<double>(), 0.0);
    if (c["y"] == "co2_per_capita") EXPECT_EQ(c["skipped_missing"], 1);
  }
  EXPECT_EQ(doc["cities"].size(), 14u);
}

TEST(CliCorrelate, MonotoneSetAndTooFew) {
  SyntheticSet set;
  std::vector<CityDataset> cities;
  std::vector<double> gas;
  for (int i = 0; i < 6; ++i) {
    const double d = 0.6 + 0.25 * i;
    cities.push_back(testing::power_law_city(d, 10, 2, 1e4, "m" + std::to_string(i)));
    gas.push_back(100.0 * d);
  }
  write_set(set, cities, gas);
  auto args = set.args("correlate");
  args.insert(args.end(), {"--transform", "linear"});
  ASSERT_EQ(run(args).code, 0);
  auto doc = Json::parse(slurp(set.dir.path / "out" / "correlations.json"));
  ASSERT_EQ(doc["correlations"].size(), 4u);
  EXPECT_GT(doc["correlations"][0]["pearson_r"].get<double>(), 0.99);

  SyntheticSet small;
  write_set(small, {cities[0], cities[1]}, {1.0, 2.0});
  EXPECT_EQ(run(small.args("correlate")).code, 1);
  auto bad = set.args("correlate");
  bad.insert(bad.end(), {"--transform", "cubic"});
  EXPECT_EQ(run(bad).code, 1);
}

TEST(CliPlane, FixturePlane) {
  TempDir out;
  auto args = fixture_args("plane", out.path);
  args.insert(args.end(), {"--grid", "30x20", "--variogram", "spherical"});
  auto r = run(args);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines(slurp(out.path / "plane_gas_per_area.csv")).size(), 601u);
  auto plane = Json::parse(slurp(out.path / "plane_gas_per_area.json"));
  EXPECT_EQ(plane["grid"].size(), 20u);
  EXPECT_EQ(plane["grid"][0].size(), 30u);
  EXPECT_EQ(plane["samples"].size(), 14u);
  auto cv = Json::parse(slurp(out.path / "plane_gas_per_area_cv.json"));
  EXPECT_EQ(cv["variogram"]["kind"], "spherical");
  EXPECT_EQ(cv["cv_stats"]["n"], 14);
  EXPECT_TRUE(fs::exists(out.path / "plane_gas_per_area.svg"));

  auto co2 = fixture_args("plane", out.path);
  co2.insert(co2.end(), {"--dependent", "co2_per_capita", "--grid", "12"});
  ASSERT_EQ(run(co2).code, 0);
  EXPECT_EQ(Json::parse(slurp(out.path / "plane_co2_per_capita.json"))["samples"].size(), 13u);

  auto badgrid = fixture_args("plane", out.path);
  badgrid.insert(badgrid.end(), {"--grid", "1x5"});
  EXPECT_EQ(run(badgrid).code, 1);
  auto baddep = fixture_args("plane", out.path);
  baddep.insert(baddep.end(), {"--dependent", "ds"});
  EXPECT_EQ(run(baddep).code, 1);
}

TEST(CliPlane, ConstantDependentGivesFlatPlane) {
  SyntheticSet set;
  std::vector<CityDataset> cities;
  for (int i = 0; i < 12; ++i) {
    cities.push_back(testing::power_law_city(0.6 + 0.1 * i, 10, 2, 1e4 * (1 + i % 3),
                                             "c" + std::to_string(i)));
  }
  write_set(set, cities, std::vector<double>(12, 42.0));
  auto args = set.args("plane");
  args.insert(args.end(), {"--grid", "10"});
  auto r = run(args);
  ASSERT_EQ(r.code, 0) << r.err;
  auto plane = Json::parse(slurp(set.dir.path / "out" / "plane_gas_per_area.json"));
  for (const auto& row : plane["grid"]) {
    for (const auto& v : row) EXPECT_NEAR(v.get<double>(), 42.0, 1e-9);
  }
  const auto svg = slurp(set.dir.path / "out" / "plane_gas_per_area.svg");
  EXPECT_EQ(svg.find("<path"), std::string::npos);

  SyntheticSet few;
  write_set(few, {cities.begin(), cities.begin() + 9}, std::vector<double>(9, 1.0));
  auto small = run(few.args("plane"));
  EXPECT_EQ(small.code, 1);
  EXPECT_NE(small.err.find("at least 10"), std::string::npos);
}

TEST(CliScenario, DeltaFiles) {
  TempDir out;
  auto base = fixture_args("scenario", out.path);
  base.insert(base.end(), {"--city", "hazel", "--grid", "20"});

  spit(out.path / "empty.json", "{}");
  auto args = base;
  args.insert(args.end(), {"--delta-file", (out.path / "empty.json").string()});
  ASSERT_EQ(run(args).code, 0);
  auto doc = Json::parse(slurp(out.path / "scenario_hazel.json"));
  EXPECT_EQ(doc["delta"]["ds"], 0.0);
  EXPECT_EQ(doc["delta"]["mean_density"], 0.0);
  EXPECT_EQ(doc["delta"]["plane_estimate"], 0.0);

  const auto city = parse_city(slurp(kFixtures / "cities" / "hazel.csv"), "hazel");
  ScenarioDelta doubling;
  for (const auto& b : city.blocks()) doubling.modified.push_back({b.block_id, 2 * b.population});
  spit(out.path / "double.json", to_json(doubling).dump());
  args = base;
  args.insert(args.end(), {"--delta-file", (out.path / "double.json").string()});
  ASSERT_EQ(run(args).code, 0);
  doc = Json::parse(slurp(out.path / "scenario_hazel.json"));
  EXPECT_NEAR(doc["delta"]["ds"].get<double>(), 0.0, 1e-12);
  EXPECT_NEAR(doc["scenario"]["mean_density"].get<double>(),
              2.0 * doc["base"]["mean_density"].get<double>(), 1e-9);

  spit(out.path / "bad.json", R"({"added_blocks": [{"block_id": "x"}]})");
  args = base;
  args.insert(args.end(), {"--delta-file", (out.path / "bad.json").string()});
  EXPECT_EQ(run(args).code, 2);

  args = base;
  args.insert(args.end(), {"--delta-file", (out.path / "missing.json").string()});
  EXPECT_EQ(run(args).code, 1);

  spit(out.path / "unknown.json", R"({"removed": ["no-such-block"]})");
  args = base;
  args.insert(args.end(), {"--delta-file", (out.path / "unknown.json").string()});
  EXPECT_EQ(run(args).code, 2);

  args = fixture_args("scenario", out.path);
  args.insert(args.end(), {"--city", "atlantis", "--delta-file", (out.path / "empty.json").string()});
  EXPECT_EQ(run(args).code, 1);
}

}  // namespace
}  // namespace urbscale::app
