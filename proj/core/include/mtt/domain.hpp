#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace mtt {

using Vec2 = Eigen::Vector2d;
using Vec4 = Eigen::Vector4d;
using Mat2 = Eigen::Matrix2d;
using Mat4 = Eigen::Matrix4d;

/// Dense target index 0..N-1; the target count is fixed for a run.
struct TargetId {
  int value = 0;
  friend auto operator<=>(const TargetId&, const TargetId&) = default;
};

/// Ground-truth origin of one measurement: a target or clutter.
class Origin {
 public:
  static Origin clutter() { return Origin(-1); }
  static Origin target(TargetId id) { return Origin(id.value); }

  bool is_clutter() const noexcept { return id_ < 0; }
  TargetId target() const noexcept { return TargetId{id_}; }
  /// Target index, or -1 for clutter (the CSV encoding).
  int code() const noexcept { return id_; }
  static Origin from_code(int code) { return Origin(code < 0 ? -1 : code); }

  friend bool operator==(const Origin&, const Origin&) = default;

 private:
  explicit Origin(int id) : id_(id) {}
  int id_;
};

struct Region {
  double x_min = 4.0;
  double x_max = 30.0;
  double y_min = 8.0;
  double y_max = 22.0;

  double area() const noexcept { return (x_max - x_min) * (y_max - y_min); }
  bool contains(const Vec2& p) const noexcept {
    return p.x() >= x_min && p.x() <= x_max && p.y() >= y_min && p.y() <= y_max;
  }
  friend bool operator==(const Region&, const Region&) = default;
};

/// Scenario parameters. States are ordered (x, vx, y, vy).
struct ScenarioConfig {
  int num_targets = 5;
  std::vector<Vec4> initial_states;
  double dt = 1.0;
  int num_scans = 20;
  double sigma_x = 0.3162;
  double sigma_y = 0.3162;
  double p_d = 0.9;
  double e_lambda = 20.0;
  Region region{};
  std::uint64_t seed = 0;

  /// Five crossing targets starting at x = 5 with y = 11..19.
  static ScenarioConfig five_target_crossing();

  /// Throws ConfigError naming the first offending field.
  void validate() const;

  double clutter_density() const noexcept { return e_lambda / region.area(); }
};

std::string to_json(const ScenarioConfig& config);
/// Parses and validates. Unknown fields are rejected; absent ones keep the
/// five_target_crossing() values.
ScenarioConfig scenario_config_from_json(std::string_view text);

/// Measurement set of one dwell.
struct Scan {
  int k = 0;
  std::vector<Vec2> measurements;
  std::optional<std::vector<Origin>> origins;

  std::size_t size() const noexcept { return measurements.size(); }
  bool labeled() const noexcept { return origins.has_value(); }
  void validate() const;
};

struct Track {
  TargetId id;
  Vec4 state = Vec4::Zero();
  Mat4 covariance = Mat4::Identity();
};

/// Euclidean distances between predicted measurements (rows) and measurements (cols).
struct CostMatrix {
  Eigen::MatrixXd values;

  Eigen::Index num_tracks() const noexcept { return values.rows(); }
  Eigen::Index num_measurements() const noexcept { return values.cols(); }
};

/// Partial one-to-one mapping from tracks to measurements.
class Assignment {
 public:
  using Pair = std::pair<std::size_t, std::size_t>;

  Assignment() = default;

  /// `measurement_of_track[j]` is the measurement assigned to track j, if any.
  /// Throws ContractViolation when a measurement is used twice or out of range.
  static Assignment from_track_map(const std::vector<std::optional<std::size_t>>& measurement_of_track,
                                   std::size_t num_measurements);

  const std::vector<Pair>& pairs() const noexcept { return pairs_; }
  const std::vector<std::size_t>& unassigned_tracks() const noexcept { return unassigned_tracks_; }
  const std::vector<std::size_t>& unassigned_measurements() const noexcept {
    return unassigned_measurements_;
  }
  std::optional<std::size_t> measurement_of(std::size_t track) const;
  std::size_t num_tracks() const noexcept { return track_map_.size(); }
  std::size_t num_measurements() const noexcept { return num_measurements_; }

  /// Re-checks the covering and one-to-one invariants.
  bool valid() const;

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::vector<std::optional<std::size_t>> track_map_;
  std::size_t num_measurements_ = 0;
  std::vector<Pair> pairs_;
  std::vector<std::size_t> unassigned_tracks_;
  std::vector<std::size_t> unassigned_measurements_;
};

/// Per-track association rows over M measurements plus a trailing miss column.
struct AssocProbabilities {
  Eigen::MatrixXd rows;

  Eigen::Index num_tracks() const noexcept { return rows.rows(); }
  Eigen::Index num_measurements() const noexcept { return rows.cols() - 1; }
  Eigen::Index miss_column() const noexcept { return rows.cols() - 1; }

  /// Entries in [0, 1] and unit row sums within `tol`; throws ContractViolation.
  void validate(double tol = 1e-9) const;
};

/// One-to-one assignment maximising the summed probability of chosen pairs.
Assignment hard_assignment_from_probs(const AssocProbabilities& probs);

}  // namespace mtt
