#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "mtt/domain.hpp"
#include "mtt/hungarian.hpp"
#include "mtt/kalman.hpp"

namespace mtt::assoc {

/// Chi-square gate threshold on the squared Mahalanobis distance (2 dof).
struct GateParams {
  double gamma = 9.21;
  void validate() const;
};

/// values(j, i) = || z_i - H x_j ||_2.
CostMatrix cost_matrix(std::span<const Track> tracks, const Scan& scan);

/// Precomputed gate of one track: predicted measurement and S^-1.
class Gate {
 public:
  /// Throws NumericalError when S is singular.
  Gate(const Track& track, const kalman::FilterParams& params);

  double statistic(const Vec2& z) const;
  const Vec2& center() const noexcept { return center_; }
  const Mat2& innovation_covariance() const noexcept { return s_; }
  /// N(z - center; 0, S).
  double likelihood(const Vec2& z) const;

 private:
  Vec2 center_;
  Mat2 s_;
  Mat2 s_inv_;
  double norm_;
};

/// Indices i with (z_i - Hx)^T S^-1 (z_i - Hx) <= gamma, ascending.
std::vector<std::size_t> gate(const Track& track, const Scan& scan, const kalman::FilterParams& params,
                              const GateParams& gp);

using ValidationMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// gated(j, i) for every track/measurement pair.
ValidationMatrix validation_matrix(std::span<const Track> tracks, const Scan& scan,
                                   const kalman::FilterParams& params, const GateParams& gp);

/// Connected components of the track/measurement gating graph, as sorted track
/// index lists ordered by their smallest track.
std::vector<std::vector<std::size_t>> track_clusters(const ValidationMatrix& gated);

inline constexpr std::size_t kDefaultMaxJointEvents = 1'000'000;

/// JPDA marginals from pairwise likelihoods. Only entries with gated(j, i)
/// are read. Each joint event is weighted by the product of p_d * L over
/// assigned pairs, (1 - p_d) per missed track and clutter_density per
/// measurement left to clutter; events are enumerated per cluster.
/// Throws ComplexityError when a cluster exceeds `max_events` joint events.
AssocProbabilities jpda_probabilities(const Eigen::MatrixXd& likelihood, const ValidationMatrix& gated,
                                      double p_d, double clutter_density,
                                      std::size_t max_events = kDefaultMaxJointEvents);

AssocProbabilities jpda(std::span<const Track> tracks, const Scan& scan, const kalman::FilterParams& params,
                        const GateParams& gp, double p_d, double clutter_density,
                        std::size_t max_events = kDefaultMaxJointEvents);

/// sqrt(gamma) * mean of sqrt(diag S) over all tracks.
double default_miss_cost(std::span<const Track> tracks, const kalman::FilterParams& params,
                         const GateParams& gp);

/// Global-nearest-neighbour assignment: Euclidean costs, gated-out pairs
/// forbidden, misses priced at `miss_cost`.
Assignment gnn_assignment(std::span<const Track> tracks, const Scan& scan, const kalman::FilterParams& params,
                          const GateParams& gp, double miss_cost);

}  // namespace mtt::assoc
