#include "mtt/engines.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "mtt/deepda.hpp"
#include "mtt/error.hpp"

namespace mtt::bench {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::HA: return "HA";
    case Method::JPDA: return "JPDA";
    case Method::DeepDA: return "DeepDA";
  }
  return "?";
}

Method method_from_string(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "ha") return Method::HA;
  if (lower == "jpda") return Method::JPDA;
  if (lower == "deepda") return Method::DeepDA;
  throw ConfigError("method", "unknown method '" + std::string(s) + "' (expected ha, jpda or deepda)");
}

EngineOutput HungarianEngine::associate(std::span<const Track> predicted, const Scan& scan) const {
  const double miss_cost = assoc::default_miss_cost(predicted, settings_.filter, settings_.gate);
  return {assoc::gnn_assignment(predicted, scan, settings_.filter, settings_.gate, miss_cost), std::nullopt};
}

EngineOutput JpdaEngine::associate(std::span<const Track> predicted, const Scan& scan) const {
  return {std::nullopt, assoc::jpda(predicted, scan, settings_.filter, settings_.gate, p_d_, clutter_density_)};
}

EngineOutput DeepDaEngine::associate(std::span<const Track> predicted, const Scan& scan) const {
  return {std::nullopt, deepda::associate(*model_, predicted, scan, settings_.filter, settings_.gate)};
}

std::unique_ptr<Engine> make_engine(Method method, const ScenarioConfig& config, const TrackerSettings& settings,
                                    const deepda::LstmModel* model) {
  switch (method) {
    case Method::HA: return std::make_unique<HungarianEngine>(settings);
    case Method::JPDA: return std::make_unique<JpdaEngine>(settings, config.p_d, config.clutter_density());
    case Method::DeepDA:
      if (model == nullptr) throw ContractViolation("DeepDA engine needs a trained model");
      return std::make_unique<DeepDaEngine>(settings, *model);
  }
  throw ContractViolation("unknown method");
}

}  // namespace mtt::bench
