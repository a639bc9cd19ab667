#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "mtt/domain.hpp"

namespace mtt::scenario {

/// True states indexed [scan][target], ordered (x, vx, y, vy).
struct GroundTruth {
  std::vector<std::vector<Vec4>> states;
  ScenarioConfig config;

  int num_scans() const noexcept { return static_cast<int>(states.size()); }
  int num_targets() const noexcept { return states.empty() ? 0 : static_cast<int>(states.front().size()); }
  Vec2 position(int k, int target) const {
    const Vec4& s = states[k][target];
    return Vec2(s[0], s[2]);
  }
};

/// Constant-velocity propagation of the initial states; no randomness.
GroundTruth generate_truth(const ScenarioConfig& config);

/// One labeled scan per truth scan. Each scan draws from its own stream
/// derive_seed(seed, {k}): detections with probability p_d, Gaussian position
/// noise, Poisson(e_lambda) clutter uniform over the region, then a shuffle.
std::vector<Scan> generate_scans(const GroundTruth& truth, std::uint64_t seed);

/// Scan at index `k` only; identical to generate_scans(truth, seed)[k].
Scan generate_scan(const GroundTruth& truth, std::uint64_t seed, int k);

/// CSV export. Measurement rows `scan,k,x,y,origin` where `scan` is the run
/// index, `k` the scan index and origin a target index or -1 for clutter.
/// Truth rows `scan,target,x,vx,y,vy` with `scan` the scan index.
void write_scans_csv(std::ostream& out, const std::vector<Scan>& scans, int run = 0);
void write_truth_csv(std::ostream& out, const GroundTruth& truth);

/// Inverse of the writers. Rows of a single run are expected; scans with no
/// measurements are recreated for every k in [0, num_scans).
std::vector<Scan> read_scans_csv(std::istream& in, int num_scans);
std::vector<std::vector<Vec4>> read_truth_csv(std::istream& in);

}  // namespace mtt::scenario
