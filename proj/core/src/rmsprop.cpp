#include "mtt/rmsprop.hpp"

#include <cmath>

#include "mtt/error.hpp"

namespace mtt::deepda {

void TrainConfig::validate() const {
  if (!(lr > 0.0)) throw ConfigError("lr", "must be positive");
  if (!(rho > 0.0 && rho < 1.0)) throw ConfigError("rho", "must lie in (0, 1)");
  if (!(eps > 0.0)) throw ConfigError("eps", "must be positive");
  if (batch < 1) throw ConfigError("batch", "must be at least 1");
  if (epochs < 1) throw ConfigError("epochs", "must be at least 1");
  if (!(clip >= 0.0)) throw ConfigError("clip", "must be non-negative");
}

RmspropState RmspropState::zeros_like(const LstmParams& params) {
  RmspropState s{params};
  s.mean_square.visit([](std::string_view, auto& t) { t.setZero(); });
  return s;
}

void rmsprop_step(LstmParams& params, const LstmParams& grads, RmspropState& state, const TrainConfig& cfg) {
  if (!params.same_shape(grads) || !params.same_shape(state.mean_square))
    throw ContractViolation("rmsprop_step: parameter, gradient and state shapes differ");

  double scale = 1.0;
  if (cfg.clip > 0.0) {
    double sq = 0.0;
    grads.visit([&](std::string_view, const auto& t) { sq += t.squaredNorm(); });
    const double norm = std::sqrt(sq);
    if (norm > cfg.clip) scale = cfg.clip / norm;
  }

  // Walk the three structures in lockstep through raw buffers.
  std::vector<double*> theta;
  std::vector<const double*> g;
  std::vector<double*> v;
  std::vector<Eigen::Index> sizes;
  params.visit([&](std::string_view, auto& t) {
    theta.push_back(t.data());
    sizes.push_back(t.size());
  });
  grads.visit([&](std::string_view, const auto& t) { g.push_back(t.data()); });
  state.mean_square.visit([&](std::string_view, auto& t) { v.push_back(t.data()); });

  for (std::size_t k = 0; k < theta.size(); ++k) {
    for (Eigen::Index i = 0; i < sizes[k]; ++i) {
      const double gi = g[k][i] * scale;
      v[k][i] = cfg.rho * v[k][i] + (1.0 - cfg.rho) * gi * gi;
      theta[k][i] -= cfg.lr * gi / (std::sqrt(v[k][i]) + cfg.eps);
    }
  }
}

}  // namespace mtt::deepda
