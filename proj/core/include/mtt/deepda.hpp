#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "mtt/assoc_classic.hpp"
#include "mtt/domain.hpp"
#include "mtt/kalman.hpp"
#include "mtt/lstm_model.hpp"

namespace mtt::deepda {

/// Normalised value written into every padded or gated-out slot feature.
inline constexpr double kPadSentinel = 1.0;

/// One recurrent sequence: the tracks of a scan in id order.
struct SequenceInput {
  std::vector<Vec2> predicted;      // H x per track
  std::vector<Vec2> measurements;   // at most m_max
  /// allowed(j, i): measurement i is a candidate for track j. Empty = all allowed.
  assoc::ValidationMatrix allowed;

  std::size_t num_tracks() const noexcept { return predicted.size(); }
  bool is_allowed(std::size_t track, std::size_t meas) const {
    return allowed.size() == 0 ||
           allowed(static_cast<Eigen::Index>(track), static_cast<Eigen::Index>(meas));
  }
};

struct InputFeatures {
  Eigen::VectorXd features;   // d * m_max, normalised
  std::vector<char> valid;    // m_max slot flags
};

/// Raw slot features (prediction minus measurement) for one track before
/// normalisation; invalid slots hold NaN.
Eigen::VectorXd raw_features(const Vec2& predicted, std::span<const Vec2> measurements,
                             std::span<const char> slot_allowed, const NetConfig& cfg);

/// Normalised network input. Throws CapacityError when M_k > m_max.
/// `slot_allowed` may be empty (every real measurement allowed).
InputFeatures build_input(const Vec2& predicted, std::span<const Vec2> measurements,
                          std::span<const char> slot_allowed, const NetConfig& cfg, const NormStats& norm);

/// Per-step values kept for backpropagation.
struct StepTrace {
  Eigen::VectorXd input;    // normalised S_i
  Eigen::VectorXd x;        // after the input projection
  Eigen::VectorXd gate_i, gate_f, gate_g, gate_o;
  Eigen::VectorXd c;
  Eigen::VectorXd h;
  Eigen::VectorXd logits;
  Eigen::VectorXd activation;  // sigmoid values (sigmoid mode) on valid columns
  Eigen::VectorXd beta;        // m_max + 1 with zeros on padded columns
  std::vector<char> valid;     // m_max + 1, miss always valid
};

struct ForwardResult {
  AssocProbabilities probs;   // N x (M_k + 1)
  std::vector<StepTrace> trace;
};

/// Runs the recurrence over the tracks; h and c start at zero.
ForwardResult forward_sequence(const LstmModel& model, const SequenceInput& input);

/// Forward pass on tracks/scan with every measurement allowed.
ForwardResult forward_scan(const LstmModel& model, std::span<const Track> tracks, const Scan& scan);

/// Sum of squared differences over all entries. Throws ContractViolation on shape mismatch.
double loss(const AssocProbabilities& beta, const AssocProbabilities& truth);

/// Supervised sample; `target` is N x (m_max + 1): slot columns then miss.
struct TrainingSample {
  SequenceInput input;
  Eigen::MatrixXd target;
};

/// Gradients of the mean batch loss, by backpropagation through the track
/// sequence of each sample. Throws NumericalError naming the sample on
/// non-finite activations.
struct BatchGradients {
  LstmParams grads;
  double mean_loss = 0.0;
};
BatchGradients backward(const LstmModel& model, std::span<const TrainingSample> batch);
BatchGradients backward(const LstmModel& model, std::span<const TrainingSample* const> batch);

/// Loss of one sample (target trimmed to the sample's measurement count).
double sample_loss(const LstmModel& model, const TrainingSample& sample);

/// Measurements offered to the network: the union of the tracks' gates,
/// compacted to at most m_max entries (closest by minimum gate statistic kept).
struct CandidateSet {
  std::vector<std::size_t> scan_index;   // compacted slot -> scan measurement, ascending
  assoc::ValidationMatrix allowed;        // N x scan_index.size()
};
CandidateSet select_candidates(std::span<const Track> tracks, const Scan& scan, const kalman::FilterParams& params,
                               const assoc::GateParams& gp, int m_max);

/// Gated inference: candidates, forward pass, rows expanded to the full scan.
AssocProbabilities associate(const LstmModel& model, std::span<const Track> tracks, const Scan& scan,
                             const kalman::FilterParams& params, const assoc::GateParams& gp);

}  // namespace mtt::deepda
