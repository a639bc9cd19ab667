#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <numeric>

#include "mtt/error.hpp"
#include "mtt/hungarian.hpp"
#include "mtt/rng.hpp"
#include "oracles.hpp"

using namespace mtt;

namespace {

CostMatrix random_cost(Rng& rng, int n, int m) {
  CostMatrix c{Eigen::MatrixXd(n, m)};
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < m; ++i) c.values(j, i) = rng.uniform(0, 10);
  return c;
}

}  // namespace

TEST(Hungarian, DiagonalOptimum) {
  CostMatrix c{Eigen::MatrixXd(2, 2)};
  c.values << 1, 2, 2, 1;
  const Assignment a = hungarian(c, 10.0);
  EXPECT_EQ(a.measurement_of(0), 0u);
  EXPECT_EQ(a.measurement_of(1), 1u);
  EXPECT_DOUBLE_EQ(assignment_cost(c, a, 10.0), 2.0);
}

TEST(Hungarian, MissDominatesExpensivePairs) {
  CostMatrix c{Eigen::MatrixXd::Constant(3, 4, 5.0)};
  const Assignment a = hungarian(c, 1.0);
  EXPECT_EQ(a.unassigned_tracks().size(), 3u);
  EXPECT_EQ(a.unassigned_measurements().size(), 4u);
  EXPECT_DOUBLE_EQ(assignment_cost(c, a, 1.0), 3.0);
}

TEST(Hungarian, EmptyInputs) {
  const Assignment none = hungarian(CostMatrix{Eigen::MatrixXd(0, 3)}, 1.0);
  EXPECT_EQ(none.num_tracks(), 0u);
  EXPECT_EQ(none.unassigned_measurements().size(), 3u);
  const Assignment no_meas = hungarian(CostMatrix{Eigen::MatrixXd(2, 0)}, 1.0);
  EXPECT_EQ(no_meas.unassigned_tracks().size(), 2u);
}

TEST(Hungarian, RejectsNonPositiveMissCost) {
  CostMatrix c{Eigen::MatrixXd::Ones(1, 1)};
  EXPECT_THROW(hungarian(c, 0.0), ContractViolation);
  EXPECT_THROW(hungarian(c, std::numeric_limits<double>::infinity()), ContractViolation);
}

TEST(Hungarian, ForbiddenPairsAreNeverChosen) {
  const double inf = std::numeric_limits<double>::infinity();
  CostMatrix c{Eigen::MatrixXd(2, 2)};
  c.values << inf, 0.1, inf, 0.2;
  const Assignment a = hungarian(c, 5.0);
  ASSERT_TRUE(a.valid());
  EXPECT_EQ(a.pairs().size(), 1u);
  EXPECT_EQ(a.measurement_of(0), 1u);
  EXPECT_FALSE(a.measurement_of(1).has_value());
}

TEST(Hungarian, TiesBreakTowardLowestMeasurementIndex) {
  CostMatrix c{Eigen::MatrixXd::Constant(1, 3, 1.0)};
  EXPECT_EQ(hungarian(c, 5.0).measurement_of(0), 0u);
}

TEST(Hungarian, MatchesExhaustiveEnumerationOnRandomInstances) {
  Rng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(5));
    const int m = 1 + static_cast<int>(rng.below(6));
    const CostMatrix c = random_cost(rng, n, m);
    const double miss = rng.uniform(0.5, 8.0);
    const Assignment a = hungarian(c, miss);
    ASSERT_TRUE(a.valid());
    ASSERT_EQ(assignment_cost(c, a, miss), oracle::brute_force_assignment_cost(c.values, miss))
        << "trial " << trial;
  }
}

TEST(Hungarian, MatchesEnumerationWithForbiddenEntries) {
  Rng rng(7);
  const double inf = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 300; ++trial) {
    CostMatrix c = random_cost(rng, 4, 5);
    for (int j = 0; j < 4; ++j)
      for (int i = 0; i < 5; ++i)
        if (rng.bernoulli(0.4)) c.values(j, i) = inf;
    const Assignment a = hungarian(c, 3.0);
    ASSERT_EQ(assignment_cost(c, a, 3.0), oracle::brute_force_assignment_cost(c.values, 3.0));
  }
}

TEST(Hungarian, PermutationInvariantCost) {
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const CostMatrix c = random_cost(rng, 4, 6);
    std::vector<int> rp(4), cp(6);
    std::iota(rp.begin(), rp.end(), 0);
    std::iota(cp.begin(), cp.end(), 0);
    rng.shuffle(rp);
    rng.shuffle(cp);
    CostMatrix p{Eigen::MatrixXd(4, 6)};
    for (int j = 0; j < 4; ++j)
      for (int i = 0; i < 6; ++i) p.values(j, i) = c.values(rp[j], cp[i]);
    const Assignment a = hungarian(c, 4.0);
    const Assignment b = hungarian(p, 4.0);
    EXPECT_NEAR(assignment_cost(c, a, 4.0), assignment_cost(p, b, 4.0), 1e-12);
    // Relabelled pairs of the permuted solution are feasible and equally cheap in the original.
    std::vector<std::optional<std::size_t>> map(4);
    for (auto [j, i] : b.pairs()) map[static_cast<std::size_t>(rp[j])] = static_cast<std::size_t>(cp[i]);
    EXPECT_NEAR(assignment_cost(c, Assignment::from_track_map(map, 6), 4.0), assignment_cost(c, a, 4.0), 1e-12);
  }
}

TEST(Hungarian, SaturatesOnceMissCostExceedsEveryEntry) {
  Rng rng(9);
  const CostMatrix c = random_cost(rng, 3, 5);
  const double max_entry = c.values.maxCoeff();
  double prev = -1;
  for (double miss : {0.5, 2.0, 5.0, 9.0}) {
    const double total = assignment_cost(c, hungarian(c, miss), miss);
    EXPECT_GE(total, prev);
    prev = total;
  }
  const Assignment a1 = hungarian(c, max_entry + 1);
  const Assignment a2 = hungarian(c, max_entry + 100);
  EXPECT_EQ(a1, a2);
  EXPECT_TRUE(a1.unassigned_tracks().empty());
}

TEST(RectangularAssignment, SolvesAndValidates) {
  Eigen::MatrixXd c(2, 3);
  c << 4, 1, 6, 2, 0, 9;
  const auto cols = solve_rectangular_assignment(c);
  EXPECT_EQ(cols, (std::vector<std::size_t>{1, 0}));
  EXPECT_THROW(solve_rectangular_assignment(Eigen::MatrixXd::Ones(3, 2)), ContractViolation);
  Eigen::MatrixXd blocked = Eigen::MatrixXd::Constant(2, 2, std::numeric_limits<double>::infinity());
  blocked(0, 0) = 1;
  blocked(1, 0) = 1;
  EXPECT_THROW(solve_rectangular_assignment(blocked), ContractViolation);
}
