#include "mtt/assoc_classic.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <Eigen/LU>

#include "mtt/error.hpp"

namespace mtt::assoc {

void GateParams::validate() const {
  if (!(gamma > 0.0)) throw ConfigError("gamma", "must be positive");
}

CostMatrix cost_matrix(std::span<const Track> tracks, const Scan& scan) {
  CostMatrix c;
  c.values.resize(static_cast<Eigen::Index>(tracks.size()), static_cast<Eigen::Index>(scan.size()));
  for (std::size_t j = 0; j < tracks.size(); ++j) {
    const Vec2 zhat = kalman::predicted_measurement(tracks[j]);
    for (std::size_t i = 0; i < scan.size(); ++i)
      c.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = (scan.measurements[i] - zhat).norm();
  }
  return c;
}

Gate::Gate(const Track& track, const kalman::FilterParams& params)
    : center_(kalman::predicted_measurement(track)), s_(kalman::innovation_covariance(track, params)) {
  const double det = s_.determinant();
  if (!(det > 0.0) || !std::isfinite(det))
    throw NumericalError("gate: innovation covariance is singular for track " + std::to_string(track.id.value));
  s_inv_ = s_.inverse();
  norm_ = 1.0 / (2.0 * std::numbers::pi * std::sqrt(det));
}

double Gate::statistic(const Vec2& z) const {
  const Vec2 nu = z - center_;
  return nu.dot(s_inv_ * nu);
}

double Gate::likelihood(const Vec2& z) const { return norm_ * std::exp(-0.5 * statistic(z)); }

std::vector<std::size_t> gate(const Track& track, const Scan& scan, const kalman::FilterParams& params,
                              const GateParams& gp) {
  const Gate g(track, params);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < scan.size(); ++i)
    if (g.statistic(scan.measurements[i]) <= gp.gamma) out.push_back(i);
  return out;
}

ValidationMatrix validation_matrix(std::span<const Track> tracks, const Scan& scan,
                                   const kalman::FilterParams& params, const GateParams& gp) {
  ValidationMatrix v(static_cast<Eigen::Index>(tracks.size()), static_cast<Eigen::Index>(scan.size()));
  for (std::size_t j = 0; j < tracks.size(); ++j) {
    const Gate g(tracks[j], params);
    for (std::size_t i = 0; i < scan.size(); ++i)
      v(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = g.statistic(scan.measurements[i]) <= gp.gamma;
  }
  return v;
}

std::vector<std::vector<std::size_t>> track_clusters(const ValidationMatrix& gated) {
  const auto n = static_cast<std::size_t>(gated.rows());
  const auto m = static_cast<std::size_t>(gated.cols());
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t first = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (!gated(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i))) continue;
      if (first == n) {
        first = j;
      } else {
        const std::size_t a = find(first), b = find(j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }
  std::vector<std::vector<std::size_t>> clusters;
  std::vector<std::size_t> slot(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t root = find(j);
    if (slot[root] == n) {
      slot[root] = clusters.size();
      clusters.emplace_back();
    }
    clusters[slot[root]].push_back(j);
  }
  return clusters;
}

double default_miss_cost(std::span<const Track> tracks, const kalman::FilterParams& params, const GateParams& gp) {
  if (tracks.empty()) return std::sqrt(gp.gamma);
  double acc = 0.0;
  for (const Track& t : tracks) {
    const Mat2 s = kalman::innovation_covariance(t, params);
    acc += std::sqrt(s(0, 0)) + std::sqrt(s(1, 1));
  }
  return std::sqrt(gp.gamma) * acc / (2.0 * static_cast<double>(tracks.size()));
}

Assignment gnn_assignment(std::span<const Track> tracks, const Scan& scan, const kalman::FilterParams& params,
                          const GateParams& gp, double miss_cost) {
  CostMatrix cost = cost_matrix(tracks, scan);
  const ValidationMatrix gated = validation_matrix(tracks, scan, params, gp);
  for (Eigen::Index j = 0; j < cost.values.rows(); ++j)
    for (Eigen::Index i = 0; i < cost.values.cols(); ++i)
      if (!gated(j, i)) cost.values(j, i) = std::numeric_limits<double>::infinity();
  return hungarian(cost, miss_cost);
}

}  // namespace mtt::assoc
