#pragma once

// Deterministic SVG output for spectra and planning planes.

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace urbscale {

struct SpectrumBand;
struct PlanningPlane;

/// Ten-stop sequential ramp (viridis), low to high. Spectrum bins index it
/// directly; the plane heatmap interpolates linearly between stops.
inline constexpr std::array<std::string_view, 10> kPalette = {
    "#440154", "#482878", "#3e4989", "#31688e", "#26828e",
    "#1f9e89", "#35b779", "#6ece58", "#b5de2b", "#fde725"};

/// Hex color at t in [0, 1] along kPalette (clamped).
std::string ramp_color(double t);

std::string render_spectrum_svg(std::span<const SpectrumBand> bands, std::string_view title,
                                int n_bins);

struct Segment {
  double x0, y0, x1, y1;
};

/// Marching-squares isoline of `level` over a row-major ny x nx grid, in
/// grid index coordinates (ix, iy). Saddles are resolved by the cell mean.
std::vector<Segment> contour_segments(std::span<const double> grid, int nx, int ny, double level);

/// Relative spread below which a grid is drawn as flat.
inline constexpr double kFlatTolerance = 1e-9;

/// Equally spaced interior levels between the grid minimum and maximum;
/// empty for a flat grid.
std::vector<double> contour_levels(std::span<const double> grid, int count);

std::string render_plane_svg(const PlanningPlane& plane, std::string_view title,
                             std::string_view z_label);

}  // namespace urbscale
