#include "mtt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mtt/error.hpp"
#include "mtt/hungarian.hpp"

namespace mtt::metrics {

void OspaParams::validate() const {
  if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("c", "must be positive");
  if (!(p >= 1.0) || !std::isfinite(p)) throw ConfigError("p", "must be at least 1");
}

double ospa(std::span<const Vec2> truth, std::span<const Vec2> estimate, const OspaParams& params) {
  params.validate();
  std::span<const Vec2> small = truth, large = estimate;
  if (small.size() > large.size()) std::swap(small, large);
  const std::size_t m = small.size();
  const std::size_t n = large.size();
  if (n == 0) return 0.0;

  const double cp = std::pow(params.c, params.p);
  double localisation = 0.0;
  if (m > 0) {
    CostMatrix cost;
    cost.values.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j)
        cost.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            std::pow(std::min(params.c, (small[i] - large[j]).norm()), params.p);
    // A miss costs more than any cut-off pair, so every row of the smaller set is matched.
    const Assignment a = hungarian(cost, cp + 1.0);
    for (const auto& [i, j] : a.pairs())
      localisation += cost.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  const double total = (localisation + static_cast<double>(n - m) * cp) / static_cast<double>(n);
  return std::pow(total, 1.0 / params.p);
}

std::vector<std::vector<int>> claimed_track_sequences(std::span<const Assignment> history,
                                                      std::span<const Scan> scans) {
  if (history.size() != scans.size()) throw ContractViolation("stti: one assignment per scan required");
  int num_targets = 0;
  for (const Scan& s : scans) {
    if (!s.labeled()) throw ContractViolation("stti: scan " + std::to_string(s.k) + " carries no origin labels");
    for (const Origin& o : *s.origins)
      if (!o.is_clutter()) num_targets = std::max(num_targets, o.target().value + 1);
  }
  std::vector<std::vector<int>> seq(static_cast<std::size_t>(num_targets), std::vector<int>(scans.size(), -1));
  for (std::size_t k = 0; k < scans.size(); ++k) {
    if (history[k].num_measurements() != scans[k].size())
      throw ContractViolation("stti: assignment and scan sizes differ at scan " + std::to_string(k));
    for (const auto& [track, meas] : history[k].pairs()) {
      const Origin& o = (*scans[k].origins)[meas];
      if (!o.is_clutter()) seq[static_cast<std::size_t>(o.target().value)][k] = static_cast<int>(track);
    }
  }
  return seq;
}

int stti(std::span<const Assignment> history, std::span<const Scan> scans) {
  int switches = 0;
  for (const auto& seq : claimed_track_sequences(history, scans)) {
    int last = -1;
    for (int id : seq) {
      if (id < 0) continue;
      if (last >= 0 && id != last) ++switches;
      last = id;
    }
  }
  return switches;
}

double mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double stddev(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double mu = mean(values);
  double acc = 0.0;
  for (double v : values) acc += (v - mu) * (v - mu);
  return std::sqrt(acc / static_cast<double>(values.size() - 1));
}

}  // namespace mtt::metrics
