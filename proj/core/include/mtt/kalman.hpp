#pragma once

#include <span>

#include "mtt/domain.hpp"

namespace mtt::kalman {

/// Constant-velocity model with position-only observations.
struct FilterParams {
  double dt = 1.0;
  // Simulated targets move at exactly constant velocity, so a small q keeps
  // gates tight without losing them.
  double q = 0.001;             // process-noise intensity
  Vec2 r_diag{0.1, 0.1};        // measurement noise variances

  void validate() const;
  Mat2 measurement_noise() const { return r_diag.asDiagonal(); }
};

/// Default initial covariance diag(0.1, 0.01, 0.1, 0.01): tracks start on the
/// true states.
Mat4 default_initial_covariance();

Mat4 transition(double dt);
/// Discrete white-noise-acceleration process noise, per axis q * [dt^4/4, dt^3/2; dt^3/2, dt^2].
Mat4 process_noise(double dt, double q);

Track predict(const Track& track, const FilterParams& params);

inline Vec2 predicted_measurement(const Track& track) { return Vec2(track.state[0], track.state[2]); }

/// H P H^T + R.
Mat2 innovation_covariance(const Track& track, const FilterParams& params);

/// Standard update with Joseph-form covariance. Throws NumericalError when S is singular.
Track update_hard(const Track& track, const Vec2& z, const FilterParams& params);

/// PDA combined update. `beta_row` holds one weight per measurement plus a
/// trailing miss weight and must sum to 1. Throws ContractViolation otherwise.
Track update_weighted(const Track& track, std::span<const Vec2> measurements,
                      std::span<const double> beta_row, const FilterParams& params);

/// Same, reading the weights from a row of association probabilities.
Track update_weighted(const Track& track, const Scan& scan, const Eigen::RowVectorXd& beta_row,
                      const FilterParams& params);

/// Predicted covariance after `iterations` predict/update cycles from
/// `initial` with a detection every scan (the update does not depend on z).
Mat4 steady_state_covariance(const FilterParams& params, const Mat4& initial, int iterations = 200);

}  // namespace mtt::kalman
