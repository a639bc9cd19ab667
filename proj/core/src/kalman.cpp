#include "mtt/kalman.hpp"

#include <cmath>
#include <string>

#include <Eigen/LU>

#include "mtt/error.hpp"

namespace mtt::kalman {

namespace {

using Mat24 = Eigen::Matrix<double, 2, 4>;
using Mat42 = Eigen::Matrix<double, 4, 2>;

Mat24 observation() {
  Mat24 h = Mat24::Zero();
  h(0, 0) = 1.0;
  h(1, 2) = 1.0;
  return h;
}

Mat4 symmetrized(const Mat4& p) { return 0.5 * (p + p.transpose()); }

struct Gain {
  Mat42 k;
  Mat2 s;
};

Gain kalman_gain(const Track& track, const FilterParams& params) {
  const Mat24 h = observation();
  const Mat2 s = h * track.covariance * h.transpose() + params.measurement_noise();
  const double det = s.determinant();
  if (!(det > 0.0) || !std::isfinite(det))
    throw NumericalError("innovation covariance is singular for track " + std::to_string(track.id.value));
  return {track.covariance * h.transpose() * s.inverse(), s};
}

Mat4 joseph(const Mat4& p, const Mat42& k, const FilterParams& params) {
  const Mat4 ikh = Mat4::Identity() - k * observation();
  return ikh * p * ikh.transpose() + k * params.measurement_noise() * k.transpose();
}

}  // namespace

void FilterParams::validate() const {
  if (!(dt > 0.0)) throw ConfigError("dt", "must be positive");
  if (!(q >= 0.0)) throw ConfigError("q", "must be non-negative");
  if (!(r_diag[0] > 0.0 && r_diag[1] > 0.0)) throw ConfigError("r_diag", "entries must be positive");
}

Mat4 default_initial_covariance() { return Vec4(0.1, 0.01, 0.1, 0.01).asDiagonal(); }

Mat4 transition(double dt) {
  Mat4 f = Mat4::Identity();
  f(0, 1) = dt;
  f(2, 3) = dt;
  return f;
}

Mat4 process_noise(double dt, double q) {
  const double dt2 = dt * dt;
  const double dt3 = dt2 * dt;
  const double dt4 = dt3 * dt;
  Mat4 qm = Mat4::Zero();
  for (int axis : {0, 2}) {
    qm(axis, axis) = dt4 / 4.0 * q;
    qm(axis, axis + 1) = dt3 / 2.0 * q;
    qm(axis + 1, axis) = dt3 / 2.0 * q;
    qm(axis + 1, axis + 1) = dt2 * q;
  }
  return qm;
}

Track predict(const Track& track, const FilterParams& params) {
  const Mat4 f = transition(params.dt);
  Track out = track;
  out.state = f * track.state;
  out.covariance = symmetrized(f * track.covariance * f.transpose() + process_noise(params.dt, params.q));
  return out;
}

Mat2 innovation_covariance(const Track& track, const FilterParams& params) {
  const Mat24 h = observation();
  return h * track.covariance * h.transpose() + params.measurement_noise();
}

Track update_hard(const Track& track, const Vec2& z, const FilterParams& params) {
  const Gain g = kalman_gain(track, params);
  const Vec2 nu = z - predicted_measurement(track);
  Track out = track;
  out.state = track.state + g.k * nu;
  out.covariance = symmetrized(joseph(track.covariance, g.k, params));
  return out;
}

Track update_weighted(const Track& track, std::span<const Vec2> measurements,
                      std::span<const double> beta_row, const FilterParams& params) {
  if (beta_row.size() != measurements.size() + 1)
    throw ContractViolation("update_weighted: beta row length must be M + 1");
  double sum = 0.0;
  for (double b : beta_row) {
    if (!(b >= -1e-12 && b <= 1.0 + 1e-12)) throw ContractViolation("update_weighted: beta outside [0, 1]");
    sum += b;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ContractViolation("update_weighted: beta row does not sum to 1");

  const double beta_miss = beta_row.back();
  if (beta_miss == 1.0) return track;

  const Gain g = kalman_gain(track, params);
  const Vec2 zhat = predicted_measurement(track);
  Vec2 nu_bar = Vec2::Zero();
  Mat2 spread = Mat2::Zero();
  for (std::size_t i = 0; i < measurements.size(); ++i) {
    const double b = beta_row[i];
    if (b == 0.0) continue;
    const Vec2 nu = measurements[i] - zhat;
    nu_bar += b * nu;
    spread += b * nu * nu.transpose();
  }
  spread -= nu_bar * nu_bar.transpose();

  Track out = track;
  out.state = track.state + g.k * nu_bar;
  const Mat4 updated = joseph(track.covariance, g.k, params);
  out.covariance = symmetrized(beta_miss * track.covariance + (1.0 - beta_miss) * updated +
                               g.k * spread * g.k.transpose());
  return out;
}

Track update_weighted(const Track& track, const Scan& scan, const Eigen::RowVectorXd& beta_row,
                      const FilterParams& params) {
  std::vector<double> row(beta_row.data(), beta_row.data() + beta_row.size());
  return update_weighted(track, std::span<const Vec2>(scan.measurements), std::span<const double>(row), params);
}

Mat4 steady_state_covariance(const FilterParams& params, const Mat4& initial, int iterations) {
  Track t;
  t.covariance = initial;
  for (int i = 0; i < iterations; ++i) t = predict(update_hard(t, predicted_measurement(t), params), params);
  return t.covariance;
}

}  // namespace mtt::kalman
