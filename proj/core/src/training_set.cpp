#include "mtt/training_set.hpp"

#include "mtt/error.hpp"
#include "mtt/rng.hpp"
#include "mtt/scenario.hpp"

namespace mtt::scenario {

std::vector<ScenarioConfig> seeded_variants(const ScenarioConfig& base, int count, std::uint64_t seed) {
  std::vector<ScenarioConfig> out(static_cast<std::size_t>(count), base);
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)].seed = derive_seed(seed, {static_cast<std::uint64_t>(i)});
  return out;
}

deepda::TrainingSet make_training_set(std::span<const ScenarioConfig> configs,
                                      std::span<const std::uint64_t> seeds, const TrainingSetOptions& options) {
  if (configs.size() != seeds.size()) throw ContractViolation("make_training_set: one seed per config required");
  const Mat4 f = kalman::transition(options.filter.dt);
  deepda::TrainingSet set;
  for (std::size_t c = 0; c < configs.size(); ++c) {
    const GroundTruth truth = generate_truth(configs[c]);
    const std::vector<Scan> scans = generate_scans(truth, seeds[c]);
    const int n = truth.num_targets();
    for (int k = 1; k < truth.num_scans(); ++k) {
      const Scan& scan = scans[static_cast<std::size_t>(k)];
      std::vector<Track> tracks;
      tracks.reserve(static_cast<std::size_t>(n));
      for (int j = 0; j < n; ++j)
        tracks.push_back(Track{TargetId{j}, f * truth.states[k - 1][j], options.gate_covariance});

      const deepda::CandidateSet cand =
          deepda::select_candidates(tracks, scan, options.filter, options.gate, options.m_max);

      deepda::TrainingSample sample;
      sample.input.allowed = cand.allowed;
      for (const Track& t : tracks) sample.input.predicted.push_back(kalman::predicted_measurement(t));
      for (std::size_t idx : cand.scan_index) sample.input.measurements.push_back(scan.measurements[idx]);
      sample.target = Eigen::MatrixXd::Zero(n, options.m_max + 1);
      for (int j = 0; j < n; ++j) {
        int slot = -1;
        for (std::size_t s = 0; s < cand.scan_index.size(); ++s) {
          const Origin& o = (*scan.origins)[cand.scan_index[s]];
          if (!o.is_clutter() && o.target().value == j && cand.allowed(j, static_cast<Eigen::Index>(s))) {
            slot = static_cast<int>(s);
            break;
          }
        }
        sample.target(j, slot >= 0 ? slot : options.m_max) = 1.0;
      }
      set.samples.push_back(std::move(sample));
    }
  }
  return set;
}

deepda::TrainingSet make_training_set(std::span<const ScenarioConfig> configs, const TrainingSetOptions& options) {
  std::vector<std::uint64_t> seeds;
  seeds.reserve(configs.size());
  for (const ScenarioConfig& c : configs) seeds.push_back(c.seed);
  return make_training_set(configs, seeds, options);
}

}  // namespace mtt::scenario
