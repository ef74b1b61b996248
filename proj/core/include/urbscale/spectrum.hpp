#pragma once

// Fractal spectra: per-class density bands colored by class area.

#include <span>
#include <string>
#include <vector>

#include "urbscale/scaling.hpp"

namespace urbscale {

inline constexpr int kSpectrumBins = 10;

struct SpectrumBand {
  double density = 0.0;
  double area_km2 = 0.0;
  int color_bin = 0;

  bool operator==(const SpectrumBand&) const = default;
};

struct FractalSpectrum {
  std::vector<SpectrumBand> bands;  // ascending density
  std::string svg;
};

/// Color bin of each area by its rank among the distinct areas:
/// bin = floor(rank * n_bins / distinct). Equal areas share a bin.
std::vector<int> area_color_bins(std::span<const double> areas, int n_bins);

/// One band per class, ordered by density, plus its SVG rendering.
/// Throws Error(invalid_argument) for an empty aggregate list.
FractalSpectrum fractal_spectrum(std::span<const ClassAggregate> aggregates,
                                 const std::string& title = "", int n_bins = kSpectrumBins);

}  // namespace urbscale
