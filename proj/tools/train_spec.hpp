#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "mtt/domain.hpp"
#include "mtt/lstm_model.hpp"
#include "mtt/rmsprop.hpp"
#include "mtt/training_set.hpp"

namespace mtt::cli {

/// Contents of train.json. Every key is optional:
///   scenario       base ScenarioConfig of the training variants (five-target crossing)
///   num_variants   seeded copies of the base scenario (500)
///   variant_seed   root seed the variant seeds are derived from (0)
///   net            {hidden, m_max, seed, output: "sigmoid"|"softmax"}
///   train          {lr, rho, eps, batch, epochs, seed, clip}
///   gate           {gamma}
struct TrainSpec {
  ScenarioConfig scenario = ScenarioConfig::five_target_crossing();
  int num_variants = 500;
  std::uint64_t variant_seed = 0;
  deepda::NetConfig net{};
  deepda::TrainConfig train{};
  assoc::GateParams gate{};

  void validate() const;
  scenario::TrainingSetOptions training_set_options() const;
};

TrainSpec train_spec_from_json(std::string_view text);
std::string to_json(const TrainSpec& spec);

}  // namespace mtt::cli
