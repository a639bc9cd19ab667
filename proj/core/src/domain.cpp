#include "mtt/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json_fields.hpp"
#include "mtt/error.hpp"
#include "mtt/hungarian.hpp"

namespace mtt {

namespace detail {

void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed,
                    std::string_view prefix) {
  if (!obj.is_object()) throw ConfigError(std::string(prefix.empty() ? "<root>" : prefix), "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError(join_path(prefix, key), "unknown field");
  }
}

namespace {
const json& require(const json& obj, std::string_view key, std::string_view prefix) {
  auto it = obj.find(std::string(key));
  if (it == obj.end()) throw ConfigError(join_path(prefix, key), "missing field");
  return *it;
}
}  // namespace

double read_number(const json& obj, std::string_view key, std::string_view prefix) {
  const json& v = require(obj, key, prefix);
  if (!v.is_number()) throw ConfigError(join_path(prefix, key), "expected a number");
  return v.get<double>();
}

long long read_integer(const json& obj, std::string_view key, std::string_view prefix) {
  const json& v = require(obj, key, prefix);
  if (!v.is_number_integer()) throw ConfigError(join_path(prefix, key), "expected an integer");
  return v.get<long long>();
}

bool read_bool(const json& obj, std::string_view key, std::string_view prefix) {
  const json& v = require(obj, key, prefix);
  if (!v.is_boolean()) throw ConfigError(join_path(prefix, key), "expected a boolean");
  return v.get<bool>();
}

std::string read_string(const json& obj, std::string_view key, std::string_view prefix) {
  const json& v = require(obj, key, prefix);
  if (!v.is_string()) throw ConfigError(join_path(prefix, key), "expected a string");
  return v.get<std::string>();
}

const json& read_object(const json& obj, std::string_view key, std::string_view prefix) {
  const json& v = require(obj, key, prefix);
  if (!v.is_object()) throw ConfigError(join_path(prefix, key), "expected an object");
  return v;
}

const json& read_array(const json& obj, std::string_view key, std::string_view prefix) {
  const json& v = require(obj, key, prefix);
  if (!v.is_array()) throw ConfigError(join_path(prefix, key), "expected an array");
  return v;
}

json parse_document(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError("<document>", e.what());
  }
}

ScenarioConfig scenario_from_json(const json& obj, std::string_view prefix) {
  reject_unknown(obj,
                 {"num_targets", "initial_states", "dt", "num_scans", "sigma_x", "sigma_y", "p_d",
                  "e_lambda", "region", "seed"},
                 prefix);
  // Absent fields keep the five-target defaults.
  ScenarioConfig c = ScenarioConfig::five_target_crossing();
  const auto has = [&](const char* key) { return obj.contains(key); };
  if (has("initial_states")) {
    const json& states = read_array(obj, "initial_states", prefix);
    const std::string states_path = join_path(prefix, "initial_states");
    c.initial_states.clear();
    for (std::size_t j = 0; j < states.size(); ++j) {
      const std::string p = states_path + "[" + std::to_string(j) + "]";
      reject_unknown(states[j], {"x", "vx", "y", "vy"}, p);
      c.initial_states.emplace_back(read_number(states[j], "x", p), read_number(states[j], "vx", p),
                                    read_number(states[j], "y", p), read_number(states[j], "vy", p));
    }
    c.num_targets = static_cast<int>(c.initial_states.size());
  }
  if (has("num_targets")) c.num_targets = static_cast<int>(read_integer(obj, "num_targets", prefix));
  if (has("dt")) c.dt = read_number(obj, "dt", prefix);
  if (has("num_scans")) c.num_scans = static_cast<int>(read_integer(obj, "num_scans", prefix));
  if (has("sigma_x")) c.sigma_x = read_number(obj, "sigma_x", prefix);
  if (has("sigma_y")) c.sigma_y = read_number(obj, "sigma_y", prefix);
  if (has("p_d")) c.p_d = read_number(obj, "p_d", prefix);
  if (has("e_lambda")) c.e_lambda = read_number(obj, "e_lambda", prefix);
  if (has("region")) {
    const std::string rp = join_path(prefix, "region");
    const json& region = read_object(obj, "region", prefix);
    reject_unknown(region, {"x_min", "x_max", "y_min", "y_max"}, rp);
    if (region.contains("x_min")) c.region.x_min = read_number(region, "x_min", rp);
    if (region.contains("x_max")) c.region.x_max = read_number(region, "x_max", rp);
    if (region.contains("y_min")) c.region.y_min = read_number(region, "y_min", rp);
    if (region.contains("y_max")) c.region.y_max = read_number(region, "y_max", rp);
  }
  if (has("seed")) {
    const long long seed = read_integer(obj, "seed", prefix);
    if (seed < 0) throw ConfigError(join_path(prefix, "seed"), "must be non-negative");
    c.seed = static_cast<std::uint64_t>(seed);
  }
  try {
    c.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(join_path(prefix, e.field()), e.message());
  }
  return c;
}

json scenario_to_json(const ScenarioConfig& c) {
  json states = json::array();
  for (const Vec4& s : c.initial_states)
    states.push_back({{"x", s[0]}, {"vx", s[1]}, {"y", s[2]}, {"vy", s[3]}});
  return {{"num_targets", c.num_targets},
          {"initial_states", states},
          {"dt", c.dt},
          {"num_scans", c.num_scans},
          {"sigma_x", c.sigma_x},
          {"sigma_y", c.sigma_y},
          {"p_d", c.p_d},
          {"e_lambda", c.e_lambda},
          {"region",
           {{"x_min", c.region.x_min},
            {"x_max", c.region.x_max},
            {"y_min", c.region.y_min},
            {"y_max", c.region.y_max}}},
          {"seed", c.seed}};
}

}  // namespace detail

ScenarioConfig ScenarioConfig::five_target_crossing() {
  ScenarioConfig c;
  c.initial_states = {
      Vec4(5.0, 1.0, 11.0, 0.4), Vec4(5.0, 1.0, 13.0, 0.2), Vec4(5.0, 1.0, 15.0, 0.0),
      Vec4(5.0, 1.0, 17.0, -0.2), Vec4(5.0, 1.0, 19.0, -0.4),
  };
  return c;
}

void ScenarioConfig::validate() const {
  if (num_targets < 1) throw ConfigError("num_targets", "must be at least 1");
  if (static_cast<int>(initial_states.size()) != num_targets)
    throw ConfigError("initial_states", "length must equal num_targets");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt", "must be positive");
  if (num_scans < 1) throw ConfigError("num_scans", "must be at least 1");
  if (!(sigma_x >= 0.0) || !std::isfinite(sigma_x)) throw ConfigError("sigma_x", "must be non-negative");
  if (!(sigma_y >= 0.0) || !std::isfinite(sigma_y)) throw ConfigError("sigma_y", "must be non-negative");
  if (!(p_d > 0.0 && p_d <= 1.0)) throw ConfigError("p_d", "must lie in (0, 1]");
  if (!(e_lambda >= 0.0) || !std::isfinite(e_lambda)) throw ConfigError("e_lambda", "must be non-negative");
  if (!(region.x_max > region.x_min) || !(region.y_max > region.y_min) || !std::isfinite(region.area()))
    throw ConfigError("region", "must have positive area");
  for (std::size_t j = 0; j < initial_states.size(); ++j) {
    const Vec4& s = initial_states[j];
    if (!s.allFinite())
      throw ConfigError("initial_states", "state " + std::to_string(j) + " is not finite");
    if (!region.contains(Vec2(s[0], s[2])))
      throw ConfigError("initial_states", "state " + std::to_string(j) + " lies outside region");
  }
}

std::string to_json(const ScenarioConfig& config) { return detail::scenario_to_json(config).dump(2); }

ScenarioConfig scenario_config_from_json(std::string_view text) {
  return detail::scenario_from_json(detail::parse_document(text), "");
}

void Scan::validate() const {
  if (!origins) return;
  if (origins->size() != measurements.size())
    throw ContractViolation("scan " + std::to_string(k) + ": origins length differs from measurements");
  std::vector<int> seen;
  for (const Origin& o : *origins) {
    if (o.is_clutter()) continue;
    if (std::find(seen.begin(), seen.end(), o.code()) != seen.end())
      throw ContractViolation("scan " + std::to_string(k) + ": target " + std::to_string(o.code()) +
                              " labels more than one measurement");
    seen.push_back(o.code());
  }
}

Assignment Assignment::from_track_map(const std::vector<std::optional<std::size_t>>& measurement_of_track,
                                      std::size_t num_measurements) {
  Assignment a;
  a.track_map_ = measurement_of_track;
  a.num_measurements_ = num_measurements;
  std::vector<bool> used(num_measurements, false);
  for (std::size_t j = 0; j < measurement_of_track.size(); ++j) {
    const auto& m = measurement_of_track[j];
    if (!m) {
      a.unassigned_tracks_.push_back(j);
      continue;
    }
    if (*m >= num_measurements)
      throw ContractViolation("assignment: measurement index " + std::to_string(*m) + " out of range");
    if (used[*m])
      throw ContractViolation("assignment: measurement " + std::to_string(*m) + " assigned twice");
    used[*m] = true;
    a.pairs_.emplace_back(j, *m);
  }
  for (std::size_t i = 0; i < num_measurements; ++i)
    if (!used[i]) a.unassigned_measurements_.push_back(i);
  return a;
}

std::optional<std::size_t> Assignment::measurement_of(std::size_t track) const {
  if (track >= track_map_.size()) throw ContractViolation("assignment: track index out of range");
  return track_map_[track];
}

bool Assignment::valid() const {
  std::vector<int> track_seen(track_map_.size(), 0);
  std::vector<int> meas_seen(num_measurements_, 0);
  for (const auto& [t, m] : pairs_) {
    if (t >= track_seen.size() || m >= meas_seen.size()) return false;
    ++track_seen[t];
    ++meas_seen[m];
  }
  for (std::size_t t : unassigned_tracks_) {
    if (t >= track_seen.size()) return false;
    ++track_seen[t];
  }
  for (std::size_t m : unassigned_measurements_) {
    if (m >= meas_seen.size()) return false;
    ++meas_seen[m];
  }
  return std::all_of(track_seen.begin(), track_seen.end(), [](int c) { return c == 1; }) &&
         std::all_of(meas_seen.begin(), meas_seen.end(), [](int c) { return c == 1; });
}

void AssocProbabilities::validate(double tol) const {
  if (rows.cols() < 1) throw ContractViolation("association rows need a miss column");
  for (Eigen::Index j = 0; j < rows.rows(); ++j) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < rows.cols(); ++i) {
      const double v = rows(j, i);
      if (!(v >= -tol && v <= 1.0 + tol))
        throw ContractViolation("association row " + std::to_string(j) + " has entry outside [0,1]");
      sum += v;
    }
    if (std::abs(sum - 1.0) > tol)
      throw ContractViolation("association row " + std::to_string(j) + " does not sum to 1");
  }
}

Assignment hard_assignment_from_probs(const AssocProbabilities& probs) {
  const Eigen::Index n = probs.num_tracks();
  const Eigen::Index m = probs.num_measurements();
  constexpr double kForbidden = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd cost = Eigen::MatrixXd::Constant(n, m + n, kForbidden);
  cost.leftCols(m) = 1.0 - probs.rows.leftCols(m).array();
  for (Eigen::Index j = 0; j < n; ++j) cost(j, m + j) = 1.0 - probs.rows(j, m);

  const std::vector<std::size_t> col = solve_rectangular_assignment(cost);
  std::vector<std::optional<std::size_t>> map(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j)
    if (static_cast<Eigen::Index>(col[j]) < m) map[j] = col[j];
  return Assignment::from_track_map(map, static_cast<std::size_t>(m));
}

}  // namespace mtt
