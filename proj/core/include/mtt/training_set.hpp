#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mtt/assoc_classic.hpp"
#include "mtt/domain.hpp"
#include "mtt/kalman.hpp"
#include "mtt/trainer.hpp"

namespace mtt::scenario {

struct TrainingSetOptions {
  int m_max = 32;
  assoc::GateParams gate{};
  kalman::FilterParams filter{};
  /// Predicted covariance used to gate training scans; defaults to the
  /// filter's steady state from the default initial covariance.
  Mat4 gate_covariance = kalman::steady_state_covariance(kalman::FilterParams{}, kalman::default_initial_covariance());
};

/// `count` copies of `base` whose seeds are derive_seed(seed, {i}).
std::vector<ScenarioConfig> seeded_variants(const ScenarioConfig& base, int count, std::uint64_t seed);

/// One sample per scan k >= 1 of every scenario. Each target's prediction is
/// its true state at k-1 propagated one step; candidates are gated as the
/// DeepDA engine does. Target rows are one-hot: the slot of the target's own
/// measurement when it is a candidate for that target, otherwise the miss
/// column. Scans are generated with `seeds[s]`.
deepda::TrainingSet make_training_set(std::span<const ScenarioConfig> configs,
                                      std::span<const std::uint64_t> seeds, const TrainingSetOptions& options);

/// Same, using each config's own seed.
deepda::TrainingSet make_training_set(std::span<const ScenarioConfig> configs, const TrainingSetOptions& options);

}  // namespace mtt::scenario
