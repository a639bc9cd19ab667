#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "mtt/error.hpp"
#include "mtt/metrics.hpp"
#include "mtt/rng.hpp"
#include "oracles.hpp"

using namespace mtt;
using namespace mtt::metrics;

namespace {

std::vector<Vec2> random_set(Rng& rng, int n, double spread) {
  std::vector<Vec2> v;
  for (int i = 0; i < n; ++i) v.emplace_back(rng.uniform(-spread, spread), rng.uniform(-spread, spread));
  return v;
}

// OSPA by enumerating every injection of the smaller set into the larger one.
double ospa_by_enumeration(std::vector<Vec2> x, std::vector<Vec2> y, double c, double p) {
  if (x.size() > y.size()) std::swap(x, y);
  const std::size_t m = x.size(), n = y.size();
  if (n == 0) return 0.0;
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double best = std::numeric_limits<double>::infinity();
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += std::pow(std::min(c, (x[i] - y[perm[i]]).norm()), p);
    best = std::min(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::pow((best + static_cast<double>(n - m) * std::pow(c, p)) / static_cast<double>(n), 1.0 / p);
}

Scan labelled_scan(const std::vector<int>& origin_codes) {
  Scan s;
  s.origins.emplace();
  for (int code : origin_codes) {
    s.measurements.push_back(Vec2::Zero());
    s.origins->push_back(Origin::from_code(code));
  }
  return s;
}

Assignment assign(const std::vector<std::optional<std::size_t>>& map, std::size_t m) {
  return Assignment::from_track_map(map, m);
}

}  // namespace

TEST(Ospa, WorkedExamples) {
  const OspaParams p{10.0, 2.0};
  const std::vector<Vec2> none;
  const std::vector<Vec2> one{Vec2(3, 7)};
  EXPECT_NEAR(ospa(none, one, p), 10.0, 1e-9);
  EXPECT_NEAR(ospa(one, none, p), 10.0, 1e-9);

  const std::vector<Vec2> x{Vec2(0, 0)};
  const std::vector<Vec2> y{Vec2(1, 0), Vec2(10, 10)};
  EXPECT_NEAR(ospa(x, y, p), std::sqrt(50.5), 1e-9);
  EXPECT_NEAR(ospa_by_enumeration(x, y, 10.0, 2.0), std::sqrt(50.5), 1e-12);
  EXPECT_EQ(ospa(none, none, p), 0.0);
}

TEST(Ospa, MatchesEnumeration) {
  Rng rng(31);
  for (int trial = 0; trial < 500; ++trial) {
    const auto x = random_set(rng, static_cast<int>(rng.below(6)), 4.0);
    const auto y = random_set(rng, static_cast<int>(rng.below(6)), 4.0);
    const OspaParams p{trial % 2 ? 1.0 : 3.0, trial % 3 ? 2.0 : 1.0};
    EXPECT_NEAR(ospa(x, y, p), ospa_by_enumeration(x, y, p.c, p.p), 1e-9);
  }
}

TEST(Ospa, MetricAxioms) {
  Rng rng(32);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto x = random_set(rng, static_cast<int>(rng.below(7)), 10.0);
    const auto y = random_set(rng, static_cast<int>(rng.below(7)), 10.0);
    const OspaParams p{rng.uniform(0.5, 12.0), 2.0};
    const double d = ospa(x, y, p);
    EXPECT_GE(d, 0.0);
    EXPECT_LE(d, p.c + 1e-12);
    EXPECT_NEAR(d, ospa(y, x, p), 1e-12);
    EXPECT_NEAR(ospa(x, x, p), 0.0, 1e-12);
    std::vector<Vec2> shuffled = x;
    rng.shuffle(shuffled);
    EXPECT_NEAR(ospa(x, shuffled, p), 0.0, 1e-12);
  }
}

TEST(Ospa, LargeCutoffApproachesMatchedRms) {
  const std::vector<Vec2> x{Vec2(0, 0), Vec2(5, 5), Vec2(10, 0)};
  const std::vector<Vec2> y{Vec2(10.3, 0.4), Vec2(0.5, 0), Vec2(5, 4)};
  // Optimal matching pairs each point with its neighbour: squared distances 0.25, 1, 0.25.
  const double rms = std::sqrt((0.25 + 1.0 + 0.25) / 3.0);
  EXPECT_NEAR(ospa(x, y, OspaParams{1e6, 2.0}), rms, 1e-9);
}

TEST(Ospa, ParameterValidation) {
  EXPECT_THROW((OspaParams{0.0, 2.0}.validate()), ConfigError);
  EXPECT_THROW((OspaParams{1.0, 0.5}.validate()), ConfigError);
  EXPECT_NO_THROW((OspaParams{1.0, 1.0}.validate()));
}

TEST(Stti, StableIdentityIsZero) {
  std::vector<Scan> scans;
  std::vector<Assignment> hist;
  for (int k = 0; k < 5; ++k) {
    scans.push_back(labelled_scan({1, -1, 0}));
    hist.push_back(assign({2, 0}, 3));
  }
  EXPECT_EQ(stti(hist, scans), 0);
}

TEST(Stti, OneSwapCountsTwice) {
  std::vector<Scan> scans;
  std::vector<Assignment> hist;
  for (int k = 0; k < 6; ++k) {
    scans.push_back(labelled_scan({0, 1}));
    hist.push_back(k < 3 ? assign({0, 1}, 2) : assign({1, 0}, 2));
  }
  EXPECT_EQ(stti(hist, scans), 2);
}

TEST(Stti, UndefinedScansAreSkipped) {
  // Target 0 is claimed by track 0, then missed, then track 0 again: no switch.
  std::vector<Scan> scans{labelled_scan({0}), labelled_scan({-1}), labelled_scan({0}), labelled_scan({0})};
  std::vector<Assignment> hist{assign({0, std::nullopt}, 1), assign({std::nullopt, std::nullopt}, 1),
                               assign({0, std::nullopt}, 1), assign({std::nullopt, 0}, 1)};
  EXPECT_EQ(stti(hist, scans), 1);
  const auto seq = claimed_track_sequences(hist, scans);
  ASSERT_EQ(seq.size(), 1u);
  EXPECT_EQ(seq[0], (std::vector<int>{0, -1, 0, 1}));
}

TEST(Stti, MatchesSequenceOracleOnRandomHistories) {
  Rng rng(33);
  for (int trial = 0; trial < 300; ++trial) {
    const int targets = 3, tracks = 3, scans_n = 15;
    std::vector<Scan> scans;
    std::vector<Assignment> hist;
    for (int k = 0; k < scans_n; ++k) {
      std::vector<int> codes;
      for (int t = 0; t < targets; ++t)
        if (rng.bernoulli(0.85)) codes.push_back(t);
      const int clutter = static_cast<int>(rng.below(3));
      for (int c = 0; c < clutter; ++c) codes.push_back(-1);
      rng.shuffle(codes);
      scans.push_back(labelled_scan(codes));
      std::vector<std::size_t> meas(codes.size());
      std::iota(meas.begin(), meas.end(), std::size_t{0});
      rng.shuffle(meas);
      std::vector<std::optional<std::size_t>> map(tracks);
      for (int j = 0; j < tracks; ++j)
        if (static_cast<std::size_t>(j) < meas.size() && rng.bernoulli(0.9)) map[static_cast<std::size_t>(j)] = meas[static_cast<std::size_t>(j)];
      hist.push_back(assign(map, codes.size()));
    }
    int expected = 0;
    for (int t = 0; t < targets; ++t) {
      std::vector<int> seq;
      for (int k = 0; k < scans_n; ++k) {
        int claimed = -1;
        const Scan& s = scans[static_cast<std::size_t>(k)];
        for (int j = 0; j < tracks; ++j) {
          const auto i = hist[static_cast<std::size_t>(k)].measurement_of(static_cast<std::size_t>(j));
          if (i && (*s.origins)[*i].code() == t) claimed = j;
        }
        seq.push_back(claimed);
      }
      expected += oracle::count_changes(seq);
    }
    EXPECT_EQ(stti(hist, scans), expected);
  }
}

TEST(Stti, InvariantUnderConsistentRelabelling) {
  Rng rng(34);
  std::vector<Scan> scans;
  std::vector<Assignment> hist, relabelled;
  const std::vector<std::size_t> rename{2, 0, 1};  // track j becomes rename[j]
  for (int k = 0; k < 12; ++k) {
    scans.push_back(labelled_scan({0, 1, 2}));
    std::vector<std::size_t> meas{0, 1, 2};
    rng.shuffle(meas);
    std::vector<std::optional<std::size_t>> map(3), moved(3);
    for (std::size_t j = 0; j < 3; ++j) {
      map[j] = meas[j];
      moved[rename[j]] = meas[j];
    }
    hist.push_back(assign(map, 3));
    relabelled.push_back(assign(moved, 3));
  }
  EXPECT_EQ(stti(hist, scans), stti(relabelled, scans));
}

TEST(Stti, ContractViolations) {
  Scan unlabelled;
  unlabelled.measurements = {Vec2::Zero()};
  const std::vector<Scan> scans{unlabelled};
  const std::vector<Assignment> hist{assign({0}, 1)};
  EXPECT_THROW(stti(hist, scans), ContractViolation);
  const std::vector<Scan> two{labelled_scan({0}), labelled_scan({0})};
  EXPECT_THROW(stti(hist, two), ContractViolation);
}

TEST(Timing, NoOpIsCheap) {
  const double s = timed([] {});
  EXPECT_GE(s, 0.0);
  EXPECT_LT(s, 1e-4);
}

TEST(Timing, SleepIsMeasured) {
  const double s = timed([] { std::this_thread::sleep_for(std::chrono::milliseconds(10)); });
  EXPECT_NEAR(s, 0.010, 0.005);
}

TEST(Timing, ReturnsTheValue) {
  const auto [v, s] = timed([] { return 42; });
  EXPECT_EQ(v, 42);
  EXPECT_GE(s, 0.0);
}

TEST(Stats, MeanAndSampleStddev) {
  std::vector<double> samples;
  for (int k = 0; k < 20; ++k) samples.push_back(0.001 * (k + 1));
  EXPECT_NEAR(mean(samples), 0.0105, 1e-15);
  EXPECT_NEAR(mean(samples), std::accumulate(samples.begin(), samples.end(), 0.0) / 20.0, 1e-18);
  const std::vector<double> v{2, 4, 4, 4, 5, 5, 7, 9};
  EXPECT_NEAR(stddev(v), std::sqrt(32.0 / 7.0), 1e-12);
  EXPECT_EQ(stddev(std::vector<double>{3.0}), 0.0);
  EXPECT_EQ(stddev(std::vector<double>{}), 0.0);
}
