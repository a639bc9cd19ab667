#pragma once

#include <cstdint>

#include "mtt/lstm_model.hpp"

namespace mtt::deepda {

struct TrainConfig {
  double lr = 1e-3;
  double rho = 0.9;
  double eps = 1e-8;
  int batch = 32;
  int epochs = 150;  // the loss is still falling steadily at 100
  std::uint64_t seed = 0;
  /// Global gradient-norm clip; 0 disables clipping.
  double clip = 0.0;

  void validate() const;
};

/// Running mean of squared gradients, one entry per parameter.
struct RmspropState {
  LstmParams mean_square;
  static RmspropState zeros_like(const LstmParams& params);
};

/// v <- rho v + (1 - rho) g^2;  theta <- theta - lr g / (sqrt(v) + eps).
/// Gradients are rescaled to norm `cfg.clip` first when clipping is enabled.
void rmsprop_step(LstmParams& params, const LstmParams& grads, RmspropState& state, const TrainConfig& cfg);

}  // namespace mtt::deepda
