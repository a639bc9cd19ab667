#pragma once

#include <chrono>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

#include "mtt/domain.hpp"

namespace mtt::metrics {

struct OspaParams {
  double c = 10.0;  // cutoff (m)
  double p = 2.0;   // order

  void validate() const;
};

/// Optimal sub-pattern assignment distance between two finite position sets.
/// The inner minimisation is solved with `hungarian` on the cut-off
/// distance^p matrix. Both sets empty gives 0.
double ospa(std::span<const Vec2> truth, std::span<const Vec2> estimate, const OspaParams& params);

/// Identity switches. For every labelled target the track claiming it at scan
/// k is the track whose assigned measurement carries its label; each change of
/// that track between consecutive scans where it is defined counts once.
/// Throws ContractViolation when a scan is unlabeled or sizes disagree.
int stti(std::span<const Assignment> history, std::span<const Scan> scans);

/// Per-target claimed track sequence used by `stti`; -1 where undefined.
std::vector<std::vector<int>> claimed_track_sequences(std::span<const Assignment> history,
                                                      std::span<const Scan> scans);

/// Wall-clock duration of `op` on the steady clock, in seconds.
template <class F>
auto timed(F&& op) {
  const auto start = std::chrono::steady_clock::now();
  if constexpr (std::is_void_v<std::invoke_result_t<F>>) {
    std::forward<F>(op)();
    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(stop - start).count();
  } else {
    auto value = std::forward<F>(op)();
    const auto stop = std::chrono::steady_clock::now();
    return std::pair<decltype(value), double>(std::move(value), std::chrono::duration<double>(stop - start).count());
  }
}

double mean(std::span<const double> values);
/// Sample standard deviation; 0 for fewer than two values.
double stddev(std::span<const double> values);

}  // namespace mtt::metrics
