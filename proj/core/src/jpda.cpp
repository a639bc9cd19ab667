#include <algorithm>
#include <cmath>
#include <limits>

#include "mtt/assoc_classic.hpp"
#include "mtt/error.hpp"

namespace mtt::assoc {

namespace {

double safe_log(double x) { return std::log(std::max(x, std::numeric_limits<double>::min())); }

struct Cluster {
  std::vector<std::size_t> tracks;
  std::vector<std::size_t> measurements;             // global indices, ascending
  std::vector<std::vector<std::size_t>> candidates;  // per track: local measurement indices
  std::vector<std::vector<double>> log_weights;      // log(p_d * L) per candidate
};

// Exact event count with early exit once `limit` is exceeded.
std::size_t count_events(const Cluster& c, std::size_t t, std::vector<char>& used, std::size_t limit) {
  if (t == c.tracks.size()) return 1;
  std::size_t total = count_events(c, t + 1, used, limit);
  for (std::size_t local : c.candidates[t]) {
    if (total > limit) break;
    if (used[local]) continue;
    used[local] = 1;
    total += count_events(c, t + 1, used, limit);
    used[local] = 0;
  }
  return total;
}

class EventAccumulator {
 public:
  EventAccumulator(const Cluster& c, double log_miss, double log_clutter)
      : c_(c),
        log_miss_(log_miss),
        log_clutter_(log_clutter),
        used_(c.measurements.size(), 0),
        choice_(c.tracks.size(), kMiss),
        acc_(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(c.tracks.size()),
                                   static_cast<Eigen::Index>(c.measurements.size()) + 1)) {}

  void run() { visit(0, 0.0, 0); }

  /// Normalised marginals, columns = local measurements + miss.
  Eigen::MatrixXd marginals() const { return acc_ / total_; }

 private:
  static constexpr std::size_t kMiss = std::numeric_limits<std::size_t>::max();

  void visit(std::size_t t, double logw, std::size_t assigned) {
    if (t == c_.tracks.size()) {
      const double w = logw + static_cast<double>(c_.measurements.size() - assigned) * log_clutter_;
      accept(w);
      return;
    }
    choice_[t] = kMiss;
    visit(t + 1, logw + log_miss_, assigned);
    const auto& cand = c_.candidates[t];
    for (std::size_t k = 0; k < cand.size(); ++k) {
      const std::size_t local = cand[k];
      if (used_[local]) continue;
      used_[local] = 1;
      choice_[t] = local;
      visit(t + 1, logw + c_.log_weights[t][k], assigned + 1);
      used_[local] = 0;
    }
    choice_[t] = kMiss;
  }

  void accept(double logw) {
    if (logw > shift_) {
      // Rescale what has been accumulated so far to the new reference.
      if (total_ > 0.0) {
        const double scale = std::exp(shift_ - logw);
        acc_ *= scale;
        total_ *= scale;
      }
      shift_ = logw;
    }
    const double e = std::exp(logw - shift_);
    total_ += e;
    const auto miss_col = static_cast<Eigen::Index>(c_.measurements.size());
    for (std::size_t t = 0; t < choice_.size(); ++t) {
      const Eigen::Index col = choice_[t] == kMiss ? miss_col : static_cast<Eigen::Index>(choice_[t]);
      acc_(static_cast<Eigen::Index>(t), col) += e;
    }
  }

  const Cluster& c_;
  double log_miss_;
  double log_clutter_;
  std::vector<char> used_;
  std::vector<std::size_t> choice_;
  Eigen::MatrixXd acc_;
  double total_ = 0.0;
  double shift_ = -std::numeric_limits<double>::infinity();
};

}  // namespace

AssocProbabilities jpda_probabilities(const Eigen::MatrixXd& likelihood, const ValidationMatrix& gated,
                                      double p_d, double clutter_density, std::size_t max_events) {
  if (likelihood.rows() != gated.rows() || likelihood.cols() != gated.cols())
    throw ContractViolation("jpda: likelihood and validation matrix shapes differ");
  if (!(p_d > 0.0 && p_d <= 1.0)) throw ContractViolation("jpda: p_d must lie in (0, 1]");
  if (!(clutter_density >= 0.0)) throw ContractViolation("jpda: clutter density must be non-negative");

  const Eigen::Index n = gated.rows();
  const Eigen::Index m = gated.cols();
  AssocProbabilities out;
  out.rows = Eigen::MatrixXd::Zero(n, m + 1);

  const double log_pd = std::log(p_d);
  const double log_miss = safe_log(1.0 - p_d);
  const double log_clutter = safe_log(clutter_density);

  for (const auto& tracks : track_clusters(gated)) {
    Cluster c;
    c.tracks = tracks;
    for (Eigen::Index i = 0; i < m; ++i)
      for (std::size_t j : tracks)
        if (gated(static_cast<Eigen::Index>(j), i)) {
          c.measurements.push_back(static_cast<std::size_t>(i));
          break;
        }
    if (c.measurements.empty()) {
      for (std::size_t j : tracks) out.rows(static_cast<Eigen::Index>(j), m) = 1.0;
      continue;
    }
    double bound = 1.0;
    for (std::size_t j : tracks) {
      auto& cand = c.candidates.emplace_back();
      auto& lw = c.log_weights.emplace_back();
      for (std::size_t local = 0; local < c.measurements.size(); ++local) {
        const auto i = static_cast<Eigen::Index>(c.measurements[local]);
        if (!gated(static_cast<Eigen::Index>(j), i)) continue;
        const double l = likelihood(static_cast<Eigen::Index>(j), i);
        if (!(l >= 0.0) || !std::isfinite(l)) throw NumericalError("jpda: likelihood is not finite");
        cand.push_back(local);
        lw.push_back(log_pd + safe_log(l));
      }
      bound *= static_cast<double>(cand.size() + 1);
    }
    if (bound > static_cast<double>(max_events)) {
      std::vector<char> used(c.measurements.size(), 0);
      const std::size_t events = count_events(c, 0, used, max_events);
      if (events > max_events)
        throw ComplexityError("jpda: cluster of " + std::to_string(tracks.size()) + " tracks and " +
                              std::to_string(c.measurements.size()) + " measurements exceeds " +
                              std::to_string(max_events) +
                              " joint events; split the cluster or tighten the gate");
    }

    EventAccumulator acc(c, log_miss, log_clutter);
    acc.run();
    const Eigen::MatrixXd marg = acc.marginals();
    for (std::size_t t = 0; t < tracks.size(); ++t) {
      const auto row = static_cast<Eigen::Index>(tracks[t]);
      for (std::size_t local = 0; local < c.measurements.size(); ++local)
        out.rows(row, static_cast<Eigen::Index>(c.measurements[local])) =
            marg(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(local));
      out.rows(row, m) = marg(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(c.measurements.size()));
    }
  }
  return out;
}

AssocProbabilities jpda(std::span<const Track> tracks, const Scan& scan, const kalman::FilterParams& params,
                        const GateParams& gp, double p_d, double clutter_density, std::size_t max_events) {
  const auto n = static_cast<Eigen::Index>(tracks.size());
  const auto m = static_cast<Eigen::Index>(scan.size());
  ValidationMatrix gated(n, m);
  Eigen::MatrixXd likelihood = Eigen::MatrixXd::Zero(n, m);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Gate g(tracks[static_cast<std::size_t>(j)], params);
    for (Eigen::Index i = 0; i < m; ++i) {
      const Vec2& z = scan.measurements[static_cast<std::size_t>(i)];
      const double d2 = g.statistic(z);
      gated(j, i) = d2 <= gp.gamma;
      if (gated(j, i)) likelihood(j, i) = g.likelihood(z);
    }
  }
  return jpda_probabilities(likelihood, gated, p_d, clutter_density, max_events);
}

}  // namespace mtt::assoc
