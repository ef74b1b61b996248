#include "urbscale/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "urbscale/numfmt.hpp"
#include "urbscale/plane.hpp"
#include "urbscale/spectrum.hpp"

namespace urbscale {
namespace {

std::string fixed(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  std::string s(buf);
  if (s == "-0.00" || s == "-0.0" || s == "-0") s.erase(0, 1);
  return s;
}

std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

int hex_channel(std::string_view hex, int offset) {
  return std::stoi(std::string(hex.substr(1 + offset, 2)), nullptr, 16);
}

std::string short_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

}  // namespace

std::string ramp_color(double t) {
  if (!(t > 0.0)) t = 0.0;
  if (t > 1.0) t = 1.0;
  const double pos = t * static_cast<double>(kPalette.size() - 1);
  const auto i = std::min(static_cast<std::size_t>(pos), kPalette.size() - 2);
  const double f = pos - static_cast<double>(i);
  char buf[8];
  int rgb[3];
  for (int c = 0; c < 3; ++c) {
    const int a = hex_channel(kPalette[i], 2 * c), b = hex_channel(kPalette[i + 1], 2 * c);
    rgb[c] = static_cast<int>(std::lround(a + (b - a) * f));
  }
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
  return buf;
}

std::string render_spectrum_svg(std::span<const SpectrumBand> bands, std::string_view title,
                                int n_bins) {
  constexpr double kWidth = 800, kHeight = 240, kLeft = 60, kRight = 780, kTop = 50,
                   kBandHeight = 100;
  const std::size_t n = bands.size();
  std::vector<double> logs(n), edges(n + 1);
  for (std::size_t i = 0; i < n; ++i) logs[i] = std::log10(bands[i].density);
  if (n == 1) {
    edges[0] = logs[0] - 0.25;
    edges[1] = logs[0] + 0.25;
  } else {
    for (std::size_t i = 1; i < n; ++i) edges[i] = 0.5 * (logs[i - 1] + logs[i]);
    edges[0] = logs[0] - (edges[1] - logs[0]);
    edges[n] = logs[n - 1] + (logs[n - 1] - edges[n - 1]);
  }
  double lo = std::floor(edges.front()), hi = std::ceil(edges.back());
  if (hi <= lo) hi = lo + 1.0;
  auto map_x = [&](double l) { return kLeft + (l - lo) / (hi - lo) * (kRight - kLeft); };
  auto palette_index = [&](int bin) {
    if (n_bins <= 1) return std::size_t{0};
    return static_cast<std::size_t>(
        std::lround(static_cast<double>(bin) * (kPalette.size() - 1) / (n_bins - 1)));
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(kWidth, 0) + "\" height=\"" +
         fixed(kHeight, 0) + "\" viewBox=\"0 0 " + fixed(kWidth, 0) + " " + fixed(kHeight, 0) +
         "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"240\" fill=\"#ffffff\"/>\n";
  svg += "<text x=\"400\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" + escape(title) +
         "</text>\n";
  svg += "<g id=\"bands\">\n";
  for (std::size_t i = 0; i < n; ++i) {
    const double x0 = map_x(edges[i]), x1 = map_x(edges[i + 1]);
    svg += "<rect x=\"" + fixed(x0) + "\" y=\"" + fixed(kTop) + "\" width=\"" + fixed(x1 - x0) +
           "\" height=\"" + fixed(kBandHeight) + "\" fill=\"" +
           std::string(kPalette[palette_index(bands[i].color_bin)]) + "\"><title>density " +
           format_double(bands[i].density) + " /km2, area " + format_double(bands[i].area_km2) +
           " km2, bin " + std::to_string(bands[i].color_bin) + "</title></rect>\n";
  }
  svg += "</g>\n<g id=\"axis\" stroke=\"#000000\">\n";
  const double axis_y = kTop + kBandHeight;
  svg += "<line x1=\"" + fixed(kLeft) + "\" y1=\"" + fixed(axis_y) + "\" x2=\"" + fixed(kRight) +
         "\" y2=\"" + fixed(axis_y) + "\"/>\n";
  for (int d = static_cast<int>(lo); d <= static_cast<int>(hi); ++d) {
    const double x = map_x(d);
    svg += "<line x1=\"" + fixed(x) + "\" y1=\"" + fixed(axis_y) + "\" x2=\"" + fixed(x) +
           "\" y2=\"" + fixed(axis_y + 6) + "\"/>\n";
    svg += "<text x=\"" + fixed(x) + "\" y=\"" + fixed(axis_y + 20) +
           "\" text-anchor=\"middle\" stroke=\"none\">1e" + std::to_string(d) + "</text>\n";
  }
  svg += "</g>\n";
  svg += "<text x=\"400\" y=\"" + fixed(axis_y + 40) +
         "\" text-anchor=\"middle\">population density (persons/km2, log scale)</text>\n";
  svg += "<g id=\"legend\">\n";
  for (int b = 0; b < n_bins; ++b) {
    const double x = kLeft + b * 36.0;
    svg += "<rect x=\"" + fixed(x) + "\" y=\"" + fixed(kHeight - 30) +
           "\" width=\"14\" height=\"14\" fill=\"" + std::string(kPalette[palette_index(b)]) +
           "\"/>\n";
    svg += "<text x=\"" + fixed(x + 17) + "\" y=\"" + fixed(kHeight - 19) + "\" font-size=\"10\">" +
           std::to_string(b) + "</text>\n";
  }
  svg += "<text x=\"" + fixed(kLeft + n_bins * 36.0 + 4) + "\" y=\"" + fixed(kHeight - 19) +
         "\" font-size=\"10\">area bin (small to large)</text>\n";
  svg += "</g>\n</svg>\n";
  return svg;
}

std::vector<double> contour_levels(std::span<const double> grid, int count) {
  if (grid.empty() || count < 1) return {};
  const auto [mn, mx] = std::minmax_element(grid.begin(), grid.end());
  if (!(*mx - *mn > kFlatTolerance * std::max({std::abs(*mn), std::abs(*mx), 1.0}))) return {};
  std::vector<double> levels;
  for (int i = 1; i <= count; ++i) levels.push_back(*mn + (*mx - *mn) * i / (count + 1));
  return levels;
}

std::vector<Segment> contour_segments(std::span<const double> grid, int nx, int ny, double level) {
  std::vector<Segment> out;
  auto at = [&](int ix, int iy) { return grid[static_cast<std::size_t>(iy) * nx + ix]; };
  auto lerp = [&](double a, double b) { return a == b ? 0.5 : (level - a) / (b - a); };
  for (int iy = 0; iy + 1 < ny; ++iy) {
    for (int ix = 0; ix + 1 < nx; ++ix) {
      // Corners: 0 = (ix, iy), 1 = (ix+1, iy), 2 = (ix+1, iy+1), 3 = (ix, iy+1).
      const double v0 = at(ix, iy), v1 = at(ix + 1, iy), v2 = at(ix + 1, iy + 1),
                   v3 = at(ix, iy + 1);
      const int code = (v0 >= level ? 1 : 0) | (v1 >= level ? 2 : 0) | (v2 >= level ? 4 : 0) |
                       (v3 >= level ? 8 : 0);
      if (code == 0 || code == 15) continue;
      // Edge crossing points: bottom (0-1), right (1-2), top (3-2), left (0-3).
      const double bx = ix + lerp(v0, v1), by = iy;
      const double rx = ix + 1, ry = iy + lerp(v1, v2);
      const double tx = ix + lerp(v3, v2), ty = iy + 1;
      const double lx = ix, ly = iy + lerp(v0, v3);
      auto seg = [&](double a, double b, double c, double d) { out.push_back({a, b, c, d}); };
      const bool center_high = 0.25 * (v0 + v1 + v2 + v3) >= level;
      switch (code) {
        case 1: case 14: seg(lx, ly, bx, by); break;
        case 2: case 13: seg(bx, by, rx, ry); break;
        case 3: case 12: seg(lx, ly, rx, ry); break;
        case 4: case 11: seg(rx, ry, tx, ty); break;
        case 6: case 9: seg(bx, by, tx, ty); break;
        case 7: case 8: seg(lx, ly, tx, ty); break;
        case 5:
          if (center_high) {
            seg(lx, ly, tx, ty);
            seg(bx, by, rx, ry);
          } else {
            seg(lx, ly, bx, by);
            seg(rx, ry, tx, ty);
          }
          break;
        case 10:
          if (center_high) {
            seg(lx, ly, bx, by);
            seg(rx, ry, tx, ty);
          } else {
            seg(lx, ly, tx, ty);
            seg(bx, by, rx, ry);
          }
          break;
        default: break;
      }
    }
  }
  return out;
}

std::string render_plane_svg(const PlanningPlane& plane, std::string_view title,
                             std::string_view z_label) {
  constexpr double kLeft = 80, kTop = 50, kPlot = 500, kWidth = 720, kHeight = 620;
  const int nx = plane.nx, ny = plane.ny;
  const auto [zmin_it, zmax_it] = std::minmax_element(plane.grid.begin(), plane.grid.end());
  const double zmin = *zmin_it, zmax = *zmax_it;
  const double span =
      zmax - zmin > kFlatTolerance * std::max({std::abs(zmin), std::abs(zmax), 1.0}) ? zmax - zmin
                                                                                  : 0.0;
  const double cw = kPlot / (nx - 1), ch = kPlot / (ny - 1);
  auto px = [&](double gx) { return kLeft + gx * cw; };
  auto py = [&](double gy) { return kTop + kPlot - gy * ch; };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"620\" viewBox=\"0 0 "
         "720 620\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + fixed(kWidth, 0) + "\" height=\"" + fixed(kHeight, 0) +
         "\" fill=\"#ffffff\"/>\n";
  svg += "<text x=\"330\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">" + escape(title) +
         "</text>\n";
  svg += "<defs><clipPath id=\"plot\"><rect x=\"" + fixed(kLeft) + "\" y=\"" + fixed(kTop) +
         "\" width=\"" + fixed(kPlot) + "\" height=\"" + fixed(kPlot) +
         "\"/></clipPath></defs>\n";
  svg += "<g id=\"heatmap\" clip-path=\"url(#plot)\" shape-rendering=\"crispEdges\">\n";
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const double t = span > 0.0 ? (plane.at(ix, iy) - zmin) / span : 0.0;
      // Cells overlap by half a unit so rounded edges leave no seams.
      svg += "<rect x=\"" + fixed(px(ix) - cw / 2) + "\" y=\"" + fixed(py(iy) - ch / 2) +
             "\" width=\"" + fixed(cw + 0.5) + "\" height=\"" + fixed(ch + 0.5) + "\" fill=\"" +
             ramp_color(t) + "\"/>\n";
    }
  }
  svg += "</g>\n<g id=\"contours\" fill=\"none\" stroke=\"#ffffff\" stroke-width=\"0.8\" "
         "clip-path=\"url(#plot)\">\n";
  for (double level : contour_levels(plane.grid, 8)) {
    const auto segs = contour_segments(plane.grid, nx, ny, level);
    if (segs.empty()) continue;
    std::string d;
    for (const auto& s : segs) {
      d += "M" + fixed(px(s.x0)) + " " + fixed(py(s.y0)) + "L" + fixed(px(s.x1)) + " " +
           fixed(py(s.y1));
    }
    svg += "<path data-level=\"" + format_double(level) + "\" d=\"" + d + "\"/>\n";
  }
  svg += "</g>\n<g id=\"samples\" fill=\"#ffffff\" stroke=\"#000000\">\n";
  const double x0 = plane.x_axis.front(), x1 = plane.x_axis.back();
  const double y0 = plane.y_axis.front(), y1 = plane.y_axis.back();
  for (const auto& s : plane.samples) {
    const double gx = (plane.x_scale.to_standard(s.x) - x0) / (x1 - x0) * (nx - 1);
    const double gy = (plane.y_scale.to_standard(s.y) - y0) / (y1 - y0) * (ny - 1);
    svg += "<circle cx=\"" + fixed(px(gx)) + "\" cy=\"" + fixed(py(gy)) + "\" r=\"3\"/>\n";
  }
  svg += "</g>\n<g id=\"axes\" stroke=\"#000000\" fill=\"none\">\n";
  svg += "<rect x=\"" + fixed(kLeft) + "\" y=\"" + fixed(kTop) + "\" width=\"" + fixed(kPlot) +
         "\" height=\"" + fixed(kPlot) + "\"/>\n</g>\n<g id=\"ticks\">\n";
  for (int i = 0; i <= 4; ++i) {
    const int ix = (nx - 1) * i / 4, iy = (ny - 1) * i / 4;
    svg += "<text x=\"" + fixed(px(ix)) + "\" y=\"" + fixed(kTop + kPlot + 18) +
           "\" text-anchor=\"middle\">" + short_number(plane.raw_x(ix)) + "</text>\n";
    svg += "<text x=\"" + fixed(kLeft - 6) + "\" y=\"" + fixed(py(iy) + 4) +
           "\" text-anchor=\"end\">" + short_number(plane.raw_y(iy)) + "</text>\n";
  }
  svg += "<text x=\"" + fixed(kLeft + kPlot / 2) + "\" y=\"" + fixed(kTop + kPlot + 40) +
         "\" text-anchor=\"middle\">mean population density (persons/km2)</text>\n";
  svg += "<text x=\"20\" y=\"" + fixed(kTop + kPlot / 2) +
         "\" text-anchor=\"middle\" transform=\"rotate(-90 20 " + fixed(kTop + kPlot / 2) +
         ")\">scaling indicator D_s</text>\n</g>\n<g id=\"colorbar\">\n";
  constexpr int kSteps = 50;
  const double bar_x = kLeft + kPlot + 30, bar_h = kPlot / kSteps;
  for (int i = 0; i < kSteps; ++i) {
    const double t = (i + 0.5) / kSteps;
    svg += "<rect x=\"" + fixed(bar_x) + "\" y=\"" + fixed(kTop + kPlot - (i + 1) * bar_h) +
           "\" width=\"20\" height=\"" + fixed(bar_h) + "\" fill=\"" + ramp_color(t) + "\"/>\n";
  }
  svg += "<text x=\"" + fixed(bar_x + 24) + "\" y=\"" + fixed(kTop + kPlot) + "\">" +
         short_number(zmin) + "</text>\n";
  svg += "<text x=\"" + fixed(bar_x + 24) + "\" y=\"" + fixed(kTop + 10) + "\">" +
         short_number(zmax) + "</text>\n";
  svg += "<text x=\"" + fixed(bar_x) + "\" y=\"" + fixed(kTop - 10) + "\">" + escape(z_label) +
         "</text>\n</g>\n</svg>\n";
  return svg;
}

}  // namespace urbscale
