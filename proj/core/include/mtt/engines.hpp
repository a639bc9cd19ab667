#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string_view>

#include "mtt/assoc_classic.hpp"
#include "mtt/domain.hpp"
#include "mtt/kalman.hpp"
#include "mtt/lstm_model.hpp"

namespace mtt::bench {

enum class Method { HA, JPDA, DeepDA };

std::string_view to_string(Method m);
/// Accepts "ha", "jpda", "deepda" in any letter case.
Method method_from_string(std::string_view s);

/// Filter and gate settings shared by every engine in an episode.
struct TrackerSettings {
  kalman::FilterParams filter{};
  assoc::GateParams gate{};
  Mat4 initial_covariance = kalman::default_initial_covariance();
};

/// Output of one association call: a hard assignment (HA) or probability rows.
struct EngineOutput {
  std::optional<Assignment> hard;
  std::optional<AssocProbabilities> probs;
};

class Engine {
 public:
  virtual ~Engine() = default;
  virtual EngineOutput associate(std::span<const Track> predicted, const Scan& scan) const = 0;
};

/// Gated global-nearest-neighbour assignment with the default miss cost.
class HungarianEngine final : public Engine {
 public:
  explicit HungarianEngine(TrackerSettings settings) : settings_(settings) {}
  EngineOutput associate(std::span<const Track> predicted, const Scan& scan) const override;

 private:
  TrackerSettings settings_;
};

class JpdaEngine final : public Engine {
 public:
  JpdaEngine(TrackerSettings settings, double p_d, double clutter_density)
      : settings_(settings), p_d_(p_d), clutter_density_(clutter_density) {}
  EngineOutput associate(std::span<const Track> predicted, const Scan& scan) const override;

 private:
  TrackerSettings settings_;
  double p_d_;
  double clutter_density_;
};

/// Borrows the model; it must outlive the engine.
class DeepDaEngine final : public Engine {
 public:
  DeepDaEngine(TrackerSettings settings, const deepda::LstmModel& model) : settings_(settings), model_(&model) {}
  EngineOutput associate(std::span<const Track> predicted, const Scan& scan) const override;

 private:
  TrackerSettings settings_;
  const deepda::LstmModel* model_;
};

/// JPDA clutter density is e_lambda / region area. DeepDA requires `model`
/// (ContractViolation otherwise).
std::unique_ptr<Engine> make_engine(Method method, const ScenarioConfig& config, const TrackerSettings& settings,
                                    const deepda::LstmModel* model);

}  // namespace mtt::bench
