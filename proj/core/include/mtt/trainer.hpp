#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "mtt/deepda.hpp"
#include "mtt/lstm_model.hpp"
#include "mtt/rmsprop.hpp"

namespace mtt::deepda {

struct TrainingSet {
  std::vector<TrainingSample> samples;
  bool empty() const noexcept { return samples.empty(); }
  std::size_t size() const noexcept { return samples.size(); }
};

/// Min-max statistics of the raw slot features over every valid slot. Values
/// are pooled per measurement axis across slots, so all slots share the same
/// statistics. Axes with no data get min = max = 0.
NormStats fit_norm_stats(const TrainingSet& data, const NetConfig& cfg);

struct TrainResult {
  LstmModel model;
  std::vector<double> loss_curve;  // mean sample loss per epoch
};

using EpochCallback = std::function<void(int epoch, double mean_loss)>;

/// Fits NormStats, initialises the model from net_cfg.seed, then runs
/// shuffled mini-batch epochs of forward/backward/RMSprop. Deterministic for
/// fixed seeds. Throws NumericalError naming the epoch if the loss diverges.
TrainResult train(const TrainingSet& data, const NetConfig& net_cfg, const TrainConfig& train_cfg,
                  const EpochCallback& on_epoch = {});

/// Same, continuing from an existing model (NormStats kept).
TrainResult train_from(LstmModel model, const TrainingSet& data, const TrainConfig& train_cfg,
                       const EpochCallback& on_epoch = {});

/// `epoch,mean_loss` with 1-based epochs.
void write_loss_curve_csv(std::ostream& out, const std::vector<double>& curve);

}  // namespace mtt::deepda
