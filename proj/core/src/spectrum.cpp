#include "urbscale/spectrum.hpp"

#include <algorithm>

#include "urbscale/error.hpp"
#include "urbscale/render.hpp"

namespace urbscale {

std::vector<int> area_color_bins(std::span<const double> areas, int n_bins) {
  if (n_bins < 1) throw Error(ErrorCode::invalid_argument, "need at least one color bin");
  std::vector<double> distinct(areas.begin(), areas.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  const auto m = static_cast<long long>(distinct.size());
  std::vector<int> bins;
  bins.reserve(areas.size());
  for (double a : areas) {
    const auto rank = std::lower_bound(distinct.begin(), distinct.end(), a) - distinct.begin();
    bins.push_back(static_cast<int>(rank * n_bins / m));
  }
  return bins;
}

FractalSpectrum fractal_spectrum(std::span<const ClassAggregate> aggregates,
                                 const std::string& title, int n_bins) {
  if (aggregates.empty()) throw Error(ErrorCode::invalid_argument, "no classes to plot");
  if (n_bins < 1 || n_bins > static_cast<int>(kPalette.size())) {
    throw Error(ErrorCode::invalid_argument, "color bin count must be within the palette size");
  }
  std::vector<ClassAggregate> sorted(aggregates.begin(), aggregates.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& a, const auto& b) { return a.density < b.density; });
  std::vector<double> areas;
  for (const auto& a : sorted) areas.push_back(a.area_km2);
  const auto bins = area_color_bins(areas, n_bins);

  FractalSpectrum out;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    out.bands.push_back(SpectrumBand{sorted[i].density, sorted[i].area_km2, bins[i]});
  }
  out.svg = render_spectrum_svg(out.bands, title, n_bins);
  return out;
}

}  // namespace urbscale
