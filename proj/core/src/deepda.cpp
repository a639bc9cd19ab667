#include "mtt/deepda.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/LU>

#include "mtt/error.hpp"

namespace mtt::deepda {

namespace {

Eigen::VectorXd sigmoid(const Eigen::VectorXd& v) { return (1.0 + (-v.array()).exp()).inverse().matrix(); }

void require_input_fits(const NetConfig& cfg, std::size_t num_measurements) {
  if (cfg.d != 2) throw ContractViolation("deepda: only d = 2 position measurements are supported");
  if (num_measurements > static_cast<std::size_t>(cfg.m_max))
    throw CapacityError("deepda: scan has " + std::to_string(num_measurements) + " measurements but the network has " +
                        std::to_string(cfg.m_max) + " slots");
}

std::vector<char> slot_flags(const SequenceInput& input, std::size_t track) {
  std::vector<char> flags(input.measurements.size());
  for (std::size_t i = 0; i < flags.size(); ++i) flags[i] = input.is_allowed(track, i) ? 1 : 0;
  return flags;
}

}  // namespace

Eigen::VectorXd raw_features(const Vec2& predicted, std::span<const Vec2> measurements,
                             std::span<const char> slot_allowed, const NetConfig& cfg) {
  require_input_fits(cfg, measurements.size());
  if (!slot_allowed.empty() && slot_allowed.size() != measurements.size())
    throw ContractViolation("deepda: slot mask length differs from the measurement count");
  Eigen::VectorXd raw = Eigen::VectorXd::Constant(cfg.input_size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t s = 0; s < measurements.size(); ++s) {
    if (!slot_allowed.empty() && !slot_allowed[s]) continue;
    const Vec2 diff = predicted - measurements[s];
    raw[static_cast<Eigen::Index>(2 * s)] = diff.x();
    raw[static_cast<Eigen::Index>(2 * s + 1)] = diff.y();
  }
  return raw;
}

InputFeatures build_input(const Vec2& predicted, std::span<const Vec2> measurements,
                          std::span<const char> slot_allowed, const NetConfig& cfg, const NormStats& norm) {
  const Eigen::VectorXd raw = raw_features(predicted, measurements, slot_allowed, cfg);
  if (norm.min.size() != raw.size() || norm.max.size() != raw.size())
    throw ContractViolation("deepda: norm stats size does not match the input size");
  InputFeatures out;
  out.features.resize(raw.size());
  out.valid.assign(static_cast<std::size_t>(cfg.m_max), 0);
  for (int s = 0; s < cfg.m_max; ++s) {
    const bool valid = !std::isnan(raw[2 * s]);
    out.valid[static_cast<std::size_t>(s)] = valid ? 1 : 0;
    for (int k = 0; k < cfg.d; ++k) {
      const Eigen::Index f = s * cfg.d + k;
      if (!valid) {
        out.features[f] = kPadSentinel;
        continue;
      }
      const double range = norm.max[f] - norm.min[f];
      out.features[f] = range > 0.0 ? (raw[f] - norm.min[f]) / range : 0.0;
    }
  }
  return out;
}

ForwardResult forward_sequence(const LstmModel& model, const SequenceInput& input) {
  const NetConfig& cfg = model.config;
  const LstmParams& p = model.params;
  require_input_fits(cfg, input.measurements.size());
  const std::size_t n = input.num_tracks();
  const std::size_t m = input.measurements.size();
  if (input.allowed.size() != 0 &&
      (input.allowed.rows() != static_cast<Eigen::Index>(n) || input.allowed.cols() != static_cast<Eigen::Index>(m)))
    throw ContractViolation("deepda: allowed mask shape must be tracks x measurements");

  const int h_dim = cfg.hidden;
  const int out_dim = cfg.output_size();
  ForwardResult res;
  res.trace.reserve(n);
  res.probs.rows = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m) + 1);

  Eigen::VectorXd h = Eigen::VectorXd::Zero(h_dim);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(h_dim);
  for (std::size_t j = 0; j < n; ++j) {
    const std::vector<char> flags = slot_flags(input, j);
    InputFeatures in = build_input(input.predicted[j], input.measurements, flags, cfg, model.norm);

    StepTrace st;
    st.x = p.w_in * in.features + p.b_in;
    const Eigen::VectorXd a = p.w_x * st.x + p.w_h * h + p.b_gates;
    st.gate_i = sigmoid(a.segment(0, h_dim));
    st.gate_f = sigmoid(a.segment(h_dim, h_dim));
    st.gate_g = a.segment(2 * h_dim, h_dim).array().tanh().matrix();
    st.gate_o = sigmoid(a.segment(3 * h_dim, h_dim));
    c = st.gate_f.cwiseProduct(c) + st.gate_i.cwiseProduct(st.gate_g);
    h = st.gate_o.cwiseProduct(c.array().tanh().matrix());
    st.c = c;
    st.h = h;
    st.logits = p.w_out * h + p.b_out;

    st.valid.assign(static_cast<std::size_t>(out_dim), 0);
    for (int s = 0; s < cfg.m_max; ++s) st.valid[static_cast<std::size_t>(s)] = in.valid[static_cast<std::size_t>(s)];
    st.valid.back() = 1;

    st.beta = Eigen::VectorXd::Zero(out_dim);
    st.activation = Eigen::VectorXd::Zero(out_dim);
    if (cfg.output == OutputActivation::Sigmoid) {
      double z = 0.0;
      for (int k = 0; k < out_dim; ++k) {
        if (!st.valid[static_cast<std::size_t>(k)]) continue;
        st.activation[k] = 1.0 / (1.0 + std::exp(-st.logits[k]));
        z += st.activation[k];
      }
      for (int k = 0; k < out_dim; ++k)
        if (st.valid[static_cast<std::size_t>(k)]) st.beta[k] = st.activation[k] / z;
    } else {
      double mx = -std::numeric_limits<double>::infinity();
      for (int k = 0; k < out_dim; ++k)
        if (st.valid[static_cast<std::size_t>(k)]) mx = std::max(mx, st.logits[k]);
      double z = 0.0;
      for (int k = 0; k < out_dim; ++k) {
        if (!st.valid[static_cast<std::size_t>(k)]) continue;
        st.activation[k] = std::exp(st.logits[k] - mx);
        z += st.activation[k];
      }
      for (int k = 0; k < out_dim; ++k)
        if (st.valid[static_cast<std::size_t>(k)]) st.beta[k] = st.activation[k] / z;
    }
    if (!st.beta.allFinite() || !h.allFinite())
      throw NumericalError("deepda: non-finite activation at track step " + std::to_string(j));

    const auto row = static_cast<Eigen::Index>(j);
    for (std::size_t s = 0; s < m; ++s) res.probs.rows(row, static_cast<Eigen::Index>(s)) = st.beta[static_cast<Eigen::Index>(s)];
    res.probs.rows(row, static_cast<Eigen::Index>(m)) = st.beta[cfg.m_max];
    st.input = std::move(in.features);
    res.trace.push_back(std::move(st));
  }
  return res;
}

ForwardResult forward_scan(const LstmModel& model, std::span<const Track> tracks, const Scan& scan) {
  if (tracks.empty()) throw ContractViolation("forward_scan: no tracks");
  SequenceInput input;
  input.measurements = scan.measurements;
  for (const Track& t : tracks) input.predicted.push_back(kalman::predicted_measurement(t));
  return forward_sequence(model, input);
}

double loss(const AssocProbabilities& beta, const AssocProbabilities& truth) {
  if (beta.rows.rows() != truth.rows.rows() || beta.rows.cols() != truth.rows.cols())
    throw ContractViolation("loss: shapes differ");
  return (beta.rows - truth.rows).squaredNorm();
}

namespace {

AssocProbabilities trimmed_target(const TrainingSample& s, int m_max) {
  const auto n = static_cast<Eigen::Index>(s.input.num_tracks());
  const auto m = static_cast<Eigen::Index>(s.input.measurements.size());
  if (s.target.rows() != n || s.target.cols() != m_max + 1)
    throw ContractViolation("training sample target must be tracks x (m_max + 1)");
  AssocProbabilities t;
  t.rows.resize(n, m + 1);
  t.rows.leftCols(m) = s.target.leftCols(m);
  t.rows.col(m) = s.target.col(m_max);
  return t;
}

void accumulate_sample(const LstmModel& model, const TrainingSample& sample, LstmParams& g, double& loss_sum) {
  const NetConfig& cfg = model.config;
  const LstmParams& p = model.params;
  const int h_dim = cfg.hidden;
  const int out_dim = cfg.output_size();
  ForwardResult fw = forward_sequence(model, sample.input);
  loss_sum += loss(fw.probs, trimmed_target(sample, cfg.m_max));

  const std::size_t n = fw.trace.size();
  Eigen::VectorXd dh_next = Eigen::VectorXd::Zero(h_dim);
  Eigen::VectorXd dc_next = Eigen::VectorXd::Zero(h_dim);
  Eigen::VectorXd da(4 * h_dim);
  for (std::size_t step = n; step-- > 0;) {
    const StepTrace& st = fw.trace[step];
    const Eigen::VectorXd& h_prev = step > 0 ? fw.trace[step - 1].h : Eigen::VectorXd::Zero(h_dim).eval();
    const Eigen::VectorXd& c_prev = step > 0 ? fw.trace[step - 1].c : Eigen::VectorXd::Zero(h_dim).eval();

    // dL/dbeta on valid columns, then through the normaliser.
    Eigen::VectorXd g_beta = Eigen::VectorXd::Zero(out_dim);
    for (int k = 0; k < out_dim; ++k)
      if (st.valid[static_cast<std::size_t>(k)])
        g_beta[k] = 2.0 * (st.beta[k] - sample.target(static_cast<Eigen::Index>(step), k));
    const double weighted = g_beta.dot(st.beta);
    Eigen::VectorXd d_logits = Eigen::VectorXd::Zero(out_dim);
    if (cfg.output == OutputActivation::Sigmoid) {
      double z = 0.0;
      for (int k = 0; k < out_dim; ++k)
        if (st.valid[static_cast<std::size_t>(k)]) z += st.activation[k];
      for (int k = 0; k < out_dim; ++k) {
        if (!st.valid[static_cast<std::size_t>(k)]) continue;
        const double s = st.activation[k];
        d_logits[k] = (g_beta[k] - weighted) / z * s * (1.0 - s);
      }
    } else {
      for (int k = 0; k < out_dim; ++k)
        if (st.valid[static_cast<std::size_t>(k)]) d_logits[k] = st.beta[k] * (g_beta[k] - weighted);
    }

    g.w_out.noalias() += d_logits * st.h.transpose();
    g.b_out += d_logits;
    const Eigen::VectorXd dh = p.w_out.transpose() * d_logits + dh_next;

    const Eigen::ArrayXd tanh_c = st.c.array().tanh();
    const Eigen::ArrayXd dc = dh.array() * st.gate_o.array() * (1.0 - tanh_c.square()) + dc_next.array();
    const Eigen::ArrayXd i = st.gate_i.array(), f = st.gate_f.array(), gg = st.gate_g.array(),
                         o = st.gate_o.array();
    da.segment(0, h_dim) = (dc * gg * i * (1.0 - i)).matrix();
    da.segment(h_dim, h_dim) = (dc * c_prev.array() * f * (1.0 - f)).matrix();
    da.segment(2 * h_dim, h_dim) = (dc * i * (1.0 - gg.square())).matrix();
    da.segment(3 * h_dim, h_dim) = (dh.array() * tanh_c * o * (1.0 - o)).matrix();
    dc_next = (dc * f).matrix();

    g.w_x.noalias() += da * st.x.transpose();
    g.w_h.noalias() += da * h_prev.transpose();
    g.b_gates += da;
    dh_next.noalias() = p.w_h.transpose() * da;
    const Eigen::VectorXd dx = p.w_x.transpose() * da;
    g.w_in.noalias() += dx * st.input.transpose();
    g.b_in += dx;
  }
}

template <class Get>
BatchGradients backward_impl(const LstmModel& model, std::size_t size, Get get) {
  if (size == 0) throw ContractViolation("backward: empty batch");
  BatchGradients out{LstmParams::zeros(model.config), 0.0};
  double loss_sum = 0.0;
  for (std::size_t b = 0; b < size; ++b) {
    try {
      accumulate_sample(model, get(b), out.grads, loss_sum);
    } catch (const NumericalError& e) {
      throw NumericalError("backward: sample " + std::to_string(b) + ": " + e.what());
    }
  }
  const double scale = 1.0 / static_cast<double>(size);
  out.grads.visit([&](std::string_view, auto& t) { t *= scale; });
  if (!out.grads.all_finite()) throw NumericalError("backward: non-finite gradient");
  out.mean_loss = loss_sum * scale;
  return out;
}

}  // namespace

BatchGradients backward(const LstmModel& model, std::span<const TrainingSample> batch) {
  return backward_impl(model, batch.size(), [&](std::size_t b) -> const TrainingSample& { return batch[b]; });
}

BatchGradients backward(const LstmModel& model, std::span<const TrainingSample* const> batch) {
  return backward_impl(model, batch.size(), [&](std::size_t b) -> const TrainingSample& { return *batch[b]; });
}

double sample_loss(const LstmModel& model, const TrainingSample& sample) {
  return loss(forward_sequence(model, sample.input).probs, trimmed_target(sample, model.config.m_max));
}

CandidateSet select_candidates(std::span<const Track> tracks, const Scan& scan, const kalman::FilterParams& params,
                               const assoc::GateParams& gp, int m_max) {
  const std::size_t n = tracks.size();
  const std::size_t m = scan.size();
  Eigen::MatrixXd stat(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
  for (std::size_t j = 0; j < n; ++j) {
    const assoc::Gate g(tracks[j], params);
    for (std::size_t i = 0; i < m; ++i)
      stat(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = g.statistic(scan.measurements[i]);
  }
  std::vector<std::size_t> keep;
  std::vector<double> best;
  for (std::size_t i = 0; i < m; ++i) {
    const double s = n ? stat.col(static_cast<Eigen::Index>(i)).minCoeff() : std::numeric_limits<double>::infinity();
    if (s <= gp.gamma) {
      keep.push_back(i);
      best.push_back(s);
    }
  }
  if (keep.size() > static_cast<std::size_t>(m_max)) {
    std::vector<std::size_t> order(keep.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return best[a] < best[b]; });
    order.resize(static_cast<std::size_t>(m_max));
    std::sort(order.begin(), order.end());
    std::vector<std::size_t> trimmed;
    for (std::size_t o : order) trimmed.push_back(keep[o]);
    keep = std::move(trimmed);
  }
  CandidateSet out;
  out.scan_index = keep;
  out.allowed.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t s = 0; s < keep.size(); ++s)
      out.allowed(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(s)) =
          stat(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(keep[s])) <= gp.gamma;
  return out;
}

AssocProbabilities associate(const LstmModel& model, std::span<const Track> tracks, const Scan& scan,
                             const kalman::FilterParams& params, const assoc::GateParams& gp) {
  const CandidateSet cand = select_candidates(tracks, scan, params, gp, model.config.m_max);
  SequenceInput input;
  input.allowed = cand.allowed;
  for (const Track& t : tracks) input.predicted.push_back(kalman::predicted_measurement(t));
  for (std::size_t idx : cand.scan_index) input.measurements.push_back(scan.measurements[idx]);
  const ForwardResult fw = forward_sequence(model, input);

  const auto n = static_cast<Eigen::Index>(tracks.size());
  const auto m = static_cast<Eigen::Index>(scan.size());
  AssocProbabilities out;
  out.rows = Eigen::MatrixXd::Zero(n, m + 1);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (std::size_t s = 0; s < cand.scan_index.size(); ++s)
      out.rows(j, static_cast<Eigen::Index>(cand.scan_index[s])) = fw.probs.rows(j, static_cast<Eigen::Index>(s));
    out.rows(j, m) = fw.probs.rows(j, static_cast<Eigen::Index>(cand.scan_index.size()));
  }
  return out;
}

}  // namespace mtt::deepda
