#include "urbscale/kriging.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <map>

#include "urbscale/error.hpp"

namespace urbscale {

std::vector<SamplePoint> merge_duplicate_locations(std::span<const SamplePoint> samples) {
  std::map<std::pair<double, double>, std::size_t> index;
  std::vector<SamplePoint> merged;
  std::vector<std::size_t> counts;
  for (const auto& s : samples) {
    auto [it, inserted] = index.try_emplace({s.x, s.y}, merged.size());
    if (inserted) {
      merged.push_back(s);
      counts.push_back(1);
    } else {
      merged[it->second].z += s.z;
      ++counts[it->second];
    }
  }
  for (std::size_t i = 0; i < merged.size(); ++i) merged[i].z /= static_cast<double>(counts[i]);
  return merged;
}

struct OrdinaryKriging::Impl {
  std::vector<SamplePoint> samples;
  VariogramModel model;
  Eigen::MatrixXd system;
  Eigen::FullPivLU<Eigen::MatrixXd> lu;
  double scale = 1.0;  // semivariances are divided by this before solving
};

OrdinaryKriging::OrdinaryKriging(std::span<const SamplePoint> samples, const VariogramModel& model) {
  model.validate();
  auto impl = std::make_shared<Impl>();
  impl->samples = merge_duplicate_locations(samples);
  impl->model = model;
  const auto n = static_cast<Eigen::Index>(impl->samples.size());
  if (n < 3) {
    throw Error(ErrorCode::insufficient_data, "kriging needs at least 3 distinct sample locations");
  }
  for (const auto& s : impl->samples) {
    if (!std::isfinite(s.x) || !std::isfinite(s.y) || !std::isfinite(s.z)) {
      throw Error(ErrorCode::invalid_argument, "kriging samples must be finite");
    }
  }
  // Normalizing by the total sill keeps the semivariance block and the
  // border of ones at comparable magnitude; weights are unaffected.
  impl->scale = model.nugget + model.sill;
  const double scale = impl->scale;
  auto& a = impl->system;
  a.resize(n + 1, n + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const auto& si = impl->samples[static_cast<std::size_t>(i)];
      const auto& sj = impl->samples[static_cast<std::size_t>(j)];
      a(i, j) = a(j, i) = model(std::hypot(si.x - sj.x, si.y - sj.y)) / scale;
    }
    a(i, n) = a(n, i) = 1.0;
  }
  a(n, n) = 0.0;
  impl->lu.compute(a);
  if (!impl->lu.isInvertible()) {
    throw Error(ErrorCode::singular_system, "kriging system is singular");
  }
  impl_ = std::move(impl);
}

KrigingSolution OrdinaryKriging::solve(double x, double y) const {
  if (!std::isfinite(x) || !std::isfinite(y)) {
    throw Error(ErrorCode::non_finite_query, "kriging query must be finite");
  }
  const auto& s = impl_->samples;
  const auto n = static_cast<Eigen::Index>(s.size());
  if (impl_->model.nugget == 0.0) {
    // At a sample the right-hand side equals that sample's column, so the
    // exact solution is the unit weight vector. Solving would only add the
    // rounding of a possibly ill-conditioned (gaussian) system.
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i].x == x && s[i].y == y) {
        KrigingSolution hit;
        hit.weights.assign(s.size(), 0.0);
        hit.weights[i] = 1.0;
        hit.estimate = s[i].z;
        return hit;
      }
    }
  }
  Eigen::VectorXd rhs(n + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& p = s[static_cast<std::size_t>(i)];
    rhs(i) = impl_->model(std::hypot(p.x - x, p.y - y)) / impl_->scale;
  }
  rhs(n) = 1.0;
  Eigen::VectorXd sol = impl_->lu.solve(rhs);
  // One step of iterative refinement tightens the unbiasedness row.
  const Eigen::VectorXd residual = rhs - impl_->system * sol;
  sol += impl_->lu.solve(residual);

  KrigingSolution out;
  out.weights.resize(s.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    out.weights[static_cast<std::size_t>(i)] = sol(i);
    out.estimate += sol(i) * s[static_cast<std::size_t>(i)].z;
    out.variance += sol(i) * rhs(i);
  }
  out.variance += sol(n);
  // The floor applies in sill units.
  if (out.variance < kVarianceFloor) {
    throw Error(ErrorCode::negative_variance, "kriging variance is negative");
  }
  out.variance = std::max(out.variance, 0.0) * impl_->scale;
  out.lagrange = sol(n) * impl_->scale;
  return out;
}

KrigingEstimate OrdinaryKriging::estimate(double x, double y) const {
  const auto sol = solve(x, y);
  return {sol.estimate, sol.variance};
}

std::span<const SamplePoint> OrdinaryKriging::samples() const noexcept { return impl_->samples; }

const VariogramModel& OrdinaryKriging::model() const noexcept { return impl_->model; }

KrigingEstimate krige(std::span<const SamplePoint> samples, const VariogramModel& model, double x,
                      double y) {
  return OrdinaryKriging(samples, model).estimate(x, y);
}

}  // namespace urbscale
