#include "urbscale/variogram.hpp"

#include <algorithm>
#include <cmath>

#include "urbscale/error.hpp"

namespace urbscale {
namespace {

double shape(VariogramKind kind, double u) noexcept {
  switch (kind) {
    case VariogramKind::exponential: return 1.0 - std::exp(-u);
    case VariogramKind::spherical: return u < 1.0 ? 1.5 * u - 0.5 * u * u * u : 1.0;
    case VariogramKind::gaussian: return 1.0 - std::exp(-u * u);
  }
  return 0.0;
}

struct Candidate {
  double nugget = 0.0;
  double sill = 0.0;
  double range = 0.0;
  double sse = std::numeric_limits<double>::infinity();
  bool ok = false;
};

// Best non-negative (nugget, sill) for a fixed range.
Candidate fit_at_range(std::span<const LagBin> bins, VariogramKind kind, double range) {
  double sw = 0.0, sf = 0.0, sg = 0.0, sff = 0.0, sfg = 0.0;
  for (const auto& b : bins) {
    const double w = static_cast<double>(b.pair_count);
    const double f = shape(kind, b.lag / range);
    sw += w;
    sf += w * f;
    sg += w * b.semivariance;
    sff += w * f * f;
    sfg += w * f * b.semivariance;
  }
  Candidate c;
  c.range = range;
  const double det = sw * sff - sf * sf;
  if (det > 1e-14 * sw * sff) {
    c.sill = (sw * sfg - sf * sg) / det;
    c.nugget = (sg - c.sill * sf) / sw;
  }
  if (!(det > 1e-14 * sw * sff) || c.nugget < 0.0) {
    c.nugget = 0.0;
    c.sill = sff > 0.0 ? sfg / sff : 0.0;
  }
  if (!(c.sill > 0.0) || !std::isfinite(c.sill)) return c;
  c.ok = true;
  c.sse = 0.0;
  for (const auto& b : bins) {
    const double r = b.semivariance - (c.nugget + c.sill * shape(kind, b.lag / range));
    c.sse += static_cast<double>(b.pair_count) * r * r;
  }
  return c;
}

}  // namespace

std::string_view variogram_name(VariogramKind kind) noexcept {
  switch (kind) {
    case VariogramKind::exponential: return "exponential";
    case VariogramKind::spherical: return "spherical";
    case VariogramKind::gaussian: return "gaussian";
  }
  return "exponential";
}

std::optional<VariogramKind> parse_variogram(std::string_view name) noexcept {
  for (auto k : {VariogramKind::exponential, VariogramKind::spherical, VariogramKind::gaussian}) {
    if (variogram_name(k) == name) return k;
  }
  return std::nullopt;
}

double VariogramModel::operator()(double h) const noexcept {
  return nugget + sill * shape(kind, h / range);
}

void VariogramModel::validate() const {
  if (!(nugget >= 0.0) || !(sill > 0.0) || !(range > 0.0) || !std::isfinite(nugget) ||
      !std::isfinite(sill) || !std::isfinite(range)) {
    throw Error(ErrorCode::invalid_argument,
                "variogram needs nugget >= 0, sill > 0 and range > 0");
  }
}

std::vector<LagBin> empirical_variogram(std::span<const SamplePoint> samples, int n_bins,
                                        std::optional<double> max_lag) {
  if (samples.size() < 2) {
    throw Error(ErrorCode::insufficient_data, "empirical variogram needs at least 2 samples");
  }
  if (n_bins < 1) throw Error(ErrorCode::invalid_argument, "need at least one lag bin");
  const std::size_t n = samples.size();
  double limit = 0.0;
  if (max_lag) {
    limit = *max_lag;
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        limit = std::max(limit, std::hypot(samples[i].x - samples[j].x, samples[i].y - samples[j].y));
      }
    }
  }
  const double width = limit / n_bins;
  std::vector<double> dist_sum(n_bins, 0.0), sq_sum(n_bins, 0.0);
  std::vector<std::size_t> count(n_bins, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = std::hypot(samples[i].x - samples[j].x, samples[i].y - samples[j].y);
      if (d > limit) continue;
      const int bin = width > 0.0 ? std::min(n_bins - 1, static_cast<int>(d / width)) : 0;
      const double dz = samples[i].z - samples[j].z;
      dist_sum[bin] += d;
      sq_sum[bin] += dz * dz;
      ++count[bin];
    }
  }
  std::vector<LagBin> bins;
  for (int b = 0; b < n_bins; ++b) {
    if (count[b] == 0) continue;
    const double c = static_cast<double>(count[b]);
    bins.push_back(LagBin{dist_sum[b] / c, sq_sum[b] / (2.0 * c), count[b]});
  }
  return bins;
}

VariogramFit fit_variogram(std::span<const LagBin> bins, VariogramKind kind,
                           double sample_variance) {
  double max_lag = 0.0, weight = 0.0, mean_gamma = 0.0, min_lag = 0.0;
  bool flat = true;
  for (const auto& b : bins) {
    max_lag = std::max(max_lag, b.lag);
    if (b.lag > 0.0 && (min_lag == 0.0 || b.lag < min_lag)) min_lag = b.lag;
    weight += static_cast<double>(b.pair_count);
    mean_gamma += static_cast<double>(b.pair_count) * b.semivariance;
    if (b.semivariance != 0.0) flat = false;
  }
  if (weight > 0.0) mean_gamma /= weight;
  if (std::isnan(sample_variance)) sample_variance = mean_gamma;

  auto fallback = [&](std::string why) {
    VariogramFit fit;
    fit.model = VariogramModel{kind, 0.0, sample_variance > 0.0 ? sample_variance : 1.0,
                               max_lag > 0.0 ? max_lag / 2.0 : 1.0};
    fit.fallback = true;
    fit.warning = std::move(why);
    return fit;
  };

  std::size_t usable = 0;
  for (const auto& b : bins) usable += b.pair_count > 0 ? 1 : 0;
  if (usable < 3) return fallback("fewer than 3 non-empty lag bins; default variogram used");
  if (flat) return fallback("flat empirical variogram; default variogram used");
  if (!(max_lag > 0.0)) return fallback("all lags are zero; default variogram used");

  // Log-spaced grid over range, then golden-section refinement in log range.
  constexpr int kGrid = 64;
  const double lo = std::log((min_lag > 0.0 ? min_lag : max_lag) / 10.0);
  const double hi = std::log(max_lag * 10.0);
  std::vector<Candidate> grid(kGrid);
  int best = -1;
  for (int i = 0; i < kGrid; ++i) {
    const double t = lo + (hi - lo) * i / (kGrid - 1);
    grid[i] = fit_at_range(bins, kind, std::exp(t));
    if (grid[i].ok && (best < 0 || grid[i].sse < grid[best].sse)) best = i;
  }
  if (best < 0) return fallback("no admissible variogram fit; default variogram used");

  auto eval = [&](double t) { return fit_at_range(bins, kind, std::exp(t)); };
  auto score = [](const Candidate& c) {
    return c.ok ? c.sse : std::numeric_limits<double>::infinity();
  };
  double a = lo + (hi - lo) * std::max(0, best - 1) / (kGrid - 1);
  double b = lo + (hi - lo) * std::min(kGrid - 1, best + 1) / (kGrid - 1);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  Candidate fc = eval(c), fd = eval(d);
  for (int it = 0; it < 100 && (b - a) > 1e-10; ++it) {
    if (score(fc) < score(fd)) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = eval(d);
    }
  }
  Candidate chosen = grid[best];
  for (const auto& cand : {fc, fd}) {
    if (cand.ok && cand.sse < chosen.sse) chosen = cand;
  }

  VariogramFit fit;
  fit.model = VariogramModel{kind, chosen.nugget, chosen.sill, chosen.range};
  fit.weighted_sse = chosen.sse;
  return fit;
}

}  // namespace urbscale
