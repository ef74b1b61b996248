#include "urbscale/scaling.hpp"

#include <algorithm>
#include <cmath>

#include "urbscale/error.hpp"
#include "urbscale/stats.hpp"

namespace urbscale {
namespace {

// Neumaier compensated sum; keeps class areas independent of block order to
// within an ulp or so.
class CompensatedSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace

std::vector<Block> populated_blocks_by_density(const CityDataset& dataset) {
  std::vector<Block> blocks;
  for (const auto& b : dataset.blocks()) {
    if (b.population > 0) blocks.push_back(b);
  }
  std::stable_sort(blocks.begin(), blocks.end(),
                   [](const Block& a, const Block& b) { return a.density() < b.density(); });
  return blocks;
}

std::vector<ClassAggregate> aggregate_classes(std::span<const Block> sorted_blocks,
                                              const Classing& classing) {
  if (classing.assignments.size() != sorted_blocks.size()) {
    throw Error(ErrorCode::invalid_argument, "classing does not match the block list");
  }
  const auto k = static_cast<std::size_t>(classing.classes());
  std::vector<CompensatedSum> area(k);
  std::vector<std::int64_t> population(k, 0);
  for (std::size_t i = 0; i < sorted_blocks.size(); ++i) {
    const auto j = static_cast<std::size_t>(classing.assignments[i]);
    area[j].add(sorted_blocks[i].area_km2);
    population[j] += sorted_blocks[i].population;
  }
  std::vector<ClassAggregate> out;
  out.reserve(k);
  for (std::size_t j = 0; j < k; ++j) {
    const double a = area[j].value();
    if (population[j] <= 0 || !(a > 0.0)) continue;
    out.push_back(ClassAggregate{static_cast<int>(j), a, population[j],
                                 static_cast<double>(population[j]) / a});
  }
  return out;
}

std::vector<ClassAggregate> aggregate_classes(const CityDataset& dataset,
                                              const Classing& classing) {
  const auto sorted = populated_blocks_by_density(dataset);
  return aggregate_classes(sorted, classing);
}

ScalingResult scaling_indicator(std::span<const ClassAggregate> aggregates,
                                const ScalingOptions& options) {
  ScalingResult result;
  std::vector<double> xs, ys, ws;
  for (const auto& agg : aggregates) {
    if (!(agg.area_km2 > 0.0) || agg.population <= 0 || !(agg.density > 0.0)) {
      ++result.dropped_classes;
      continue;
    }
    const LogPoint p{-std::log10(agg.density), std::log10(agg.area_km2)};
    result.points.push_back(p);
    xs.push_back(p.x);
    ys.push_back(p.y);
    ws.push_back(static_cast<double>(agg.population));
  }
  result.n_classes_used = static_cast<int>(result.points.size());
  if (result.n_classes_used < 3) {
    throw Error(ErrorCode::insufficient_classes,
                "scaling regression needs at least 3 populated classes, got " +
                    std::to_string(result.n_classes_used));
  }
  if (std::all_of(xs.begin(), xs.end(), [&](double x) { return x == xs.front(); })) {
    throw Error(ErrorCode::degenerate_spectrum, "all class densities are equal");
  }
  const auto fit = options.weight_by_population ? ols(xs, ys, ws) : ols(xs, ys);
  result.ds = fit.slope;
  result.intercept = fit.intercept;
  result.r_squared = fit.r_squared;
  return result;
}

CityClasses classify_city(const CityDataset& dataset, const ClassifyOptions& options) {
  if (options.classes < 1) throw Error(ErrorCode::invalid_argument, "class count must be >= 1");
  CityClasses out;
  out.blocks = populated_blocks_by_density(dataset);
  out.excluded_zero_population = dataset.blocks().size() - out.blocks.size();
  out.requested_classes = options.classes;
  if (out.blocks.empty()) {
    throw Error(ErrorCode::degenerate_spectrum,
                "city '" + dataset.city_id() + "' has no populated blocks");
  }
  std::vector<double> densities(out.blocks.size());
  std::vector<double> weights;
  for (std::size_t i = 0; i < out.blocks.size(); ++i) densities[i] = out.blocks[i].density();
  if (options.area_weighted) {
    weights.resize(out.blocks.size());
    for (std::size_t i = 0; i < out.blocks.size(); ++i) weights[i] = out.blocks[i].area_km2;
  }
  const auto distinct = static_cast<int>(count_distinct_sorted(densities));
  out.effective_classes = std::min(options.classes, distinct);
  if (out.effective_classes < options.classes) {
    out.warnings.push_back("class count lowered from " + std::to_string(options.classes) +
                           " to " + std::to_string(out.effective_classes) +
                           " distinct densities");
  }
  out.classing = options.solver == ClusterSolver::exact
                     ? kmeans_1d_exact(densities, out.effective_classes, weights)
                     : kmeans_1d_lloyd(densities, out.effective_classes, weights);
  out.aggregates = aggregate_classes(out.blocks, out.classing);
  return out;
}

CityIndicator city_indicator(const CityDataset& dataset, const ClassifyOptions& options,
                             const ScalingOptions& scaling) {
  auto classes = classify_city(dataset, options);
  if (classes.effective_classes == 1) {
    throw Error(ErrorCode::degenerate_spectrum,
                "city '" + dataset.city_id() + "' has a single block density");
  }
  CityIndicator out;
  out.scaling = scaling_indicator(classes.aggregates, scaling);
  out.excluded_zero_population = classes.excluded_zero_population;
  out.effective_classes = classes.effective_classes;
  out.warnings = std::move(classes.warnings);
  if (out.excluded_zero_population > 0) {
    out.warnings.push_back(std::to_string(out.excluded_zero_population) +
                           " zero-population blocks excluded");
  }
  CompensatedSum area;
  for (const auto& agg : classes.aggregates) {
    area.add(agg.area_km2);
    out.populated_population += agg.population;
  }
  out.populated_area_km2 = area.value();
  out.mean_density = static_cast<double>(out.populated_population) / out.populated_area_km2;
  return out;
}

CityIndicator city_indicator(const CityDataset& dataset, int classes) {
  ClassifyOptions options;
  options.classes = classes;
  return city_indicator(dataset, options);
}

double box_counting_dimension(std::span<const BoxCount> counts) {
  if (counts.size() < 2) {
    throw Error(ErrorCode::degenerate_input, "box counting needs at least 2 classes");
  }
  std::vector<double> xs, ys;
  for (const auto& c : counts) {
    if (!(c.coverage > 0.0 && c.coverage <= 1.0)) {
      throw Error(ErrorCode::invalid_argument, "coverage fraction must lie in (0, 1]");
    }
    if (c.boxes <= 0) throw Error(ErrorCode::invalid_argument, "box count must be positive");
    xs.push_back(-std::log10(c.coverage));
    ys.push_back(std::log10(static_cast<double>(c.boxes)));
  }
  return ols(xs, ys).slope;
}

}  // namespace urbscale
