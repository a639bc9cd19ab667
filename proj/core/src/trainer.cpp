#include "mtt/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "csv_util.hpp"
#include "mtt/error.hpp"
#include "mtt/rng.hpp"

namespace mtt::deepda {

NormStats fit_norm_stats(const TrainingSet& data, const NetConfig& cfg) {
  cfg.validate();
  std::vector<double> lo(static_cast<std::size_t>(cfg.d), std::numeric_limits<double>::infinity());
  std::vector<double> hi(static_cast<std::size_t>(cfg.d), -std::numeric_limits<double>::infinity());
  for (const TrainingSample& s : data.samples) {
    for (std::size_t j = 0; j < s.input.num_tracks(); ++j) {
      for (std::size_t i = 0; i < s.input.measurements.size(); ++i) {
        if (!s.input.is_allowed(j, i)) continue;
        const Vec2 diff = s.input.predicted[j] - s.input.measurements[i];
        for (int k = 0; k < cfg.d; ++k) {
          lo[static_cast<std::size_t>(k)] = std::min(lo[static_cast<std::size_t>(k)], diff[k]);
          hi[static_cast<std::size_t>(k)] = std::max(hi[static_cast<std::size_t>(k)], diff[k]);
        }
      }
    }
  }
  NormStats norm{Eigen::VectorXd::Zero(cfg.input_size()), Eigen::VectorXd::Zero(cfg.input_size())};
  for (int s = 0; s < cfg.m_max; ++s)
    for (int k = 0; k < cfg.d; ++k) {
      if (!std::isfinite(lo[static_cast<std::size_t>(k)])) continue;
      norm.min[s * cfg.d + k] = lo[static_cast<std::size_t>(k)];
      norm.max[s * cfg.d + k] = hi[static_cast<std::size_t>(k)];
    }
  return norm;
}

TrainResult train_from(LstmModel model, const TrainingSet& data, const TrainConfig& cfg,
                       const EpochCallback& on_epoch) {
  if (data.empty()) throw ContractViolation("train: empty training set");
  cfg.validate();
  model.validate();

  TrainResult result{std::move(model), {}};
  RmspropState state = RmspropState::zeros_like(result.model.params);
  std::vector<std::size_t> order(data.size());
  std::vector<const TrainingSample*> batch;
  batch.reserve(static_cast<std::size_t>(cfg.batch));

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(derive_seed(cfg.seed, {static_cast<std::uint64_t>(epoch)}));
    rng.shuffle(order);

    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch)) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch));
      batch.clear();
      for (std::size_t b = start; b < end; ++b) batch.push_back(&data.samples[order[b]]);
      BatchGradients g;
      try {
        g = backward(result.model, std::span<const TrainingSample* const>(batch));
      } catch (const NumericalError& e) {
        throw NumericalError("training diverged at epoch " + std::to_string(epoch) + ": " + e.what());
      }
      loss_sum += g.mean_loss * static_cast<double>(batch.size());
      rmsprop_step(result.model.params, g.grads, state, cfg);
    }
    const double mean = loss_sum / static_cast<double>(data.size());
    if (!std::isfinite(mean) || !result.model.params.all_finite())
      throw NumericalError("training diverged at epoch " + std::to_string(epoch));
    result.loss_curve.push_back(mean);
    if (on_epoch) on_epoch(epoch, mean);
  }
  return result;
}

TrainResult train(const TrainingSet& data, const NetConfig& net_cfg, const TrainConfig& train_cfg,
                  const EpochCallback& on_epoch) {
  if (data.empty()) throw ContractViolation("train: empty training set");
  LstmModel model = LstmModel::initialize(net_cfg, fit_norm_stats(data, net_cfg));
  return train_from(std::move(model), data, train_cfg, on_epoch);
}

void write_loss_curve_csv(std::ostream& out, const std::vector<double>& curve) {
  out << "epoch,mean_loss\n";
  for (std::size_t e = 0; e < curve.size(); ++e) out << (e + 1) << ',' << csv::format_double(curve[e]) << '\n';
}

}  // namespace mtt::deepda
