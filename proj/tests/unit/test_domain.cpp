#include <gtest/gtest.h>

#include "mtt/domain.hpp"
#include "mtt/error.hpp"

using namespace mtt;

TEST(Region, AreaAndContainment) {
  const Region r;
  EXPECT_DOUBLE_EQ(r.area(), 26.0 * 14.0);
  EXPECT_TRUE(r.contains(Vec2(5, 11)));
  EXPECT_TRUE(r.contains(Vec2(4, 8)));
  EXPECT_FALSE(r.contains(Vec2(3.9, 11)));
  EXPECT_FALSE(r.contains(Vec2(10, 22.5)));
}

TEST(ScenarioConfig, FiveTargetCrossingInitialStates) {
  const ScenarioConfig c = ScenarioConfig::five_target_crossing();
  ASSERT_EQ(c.num_targets, 5);
  ASSERT_EQ(c.initial_states.size(), 5u);
  const double ys[] = {11, 13, 15, 17, 19};
  const double vys[] = {0.4, 0.2, 0.0, -0.2, -0.4};
  for (int j = 0; j < 5; ++j) {
    EXPECT_EQ(c.initial_states[j], Vec4(5, 1, ys[j], vys[j]));
  }
  EXPECT_EQ(c.num_scans, 20);
  EXPECT_DOUBLE_EQ(c.dt, 1.0);
  EXPECT_DOUBLE_EQ(c.sigma_x, 0.3162);
  EXPECT_NO_THROW(c.validate());
}

TEST(ScenarioConfig, ValidationNamesTheField) {
  ScenarioConfig c = ScenarioConfig::five_target_crossing();
  c.p_d = 1.5;
  try {
    c.validate();
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "p_d");
    EXPECT_NE(std::string(e.what()).find("p_d"), std::string::npos);
  }
  c = ScenarioConfig::five_target_crossing();
  c.initial_states.pop_back();
  EXPECT_THROW(c.validate(), ConfigError);
  c = ScenarioConfig::five_target_crossing();
  c.initial_states[0] = Vec4(100, 1, 11, 0);
  EXPECT_THROW(c.validate(), ConfigError);
  c = ScenarioConfig::five_target_crossing();
  c.e_lambda = -1;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(ScenarioConfig, JsonRoundTrip) {
  ScenarioConfig c = ScenarioConfig::five_target_crossing();
  c.e_lambda = 7.5;
  c.seed = 42;
  c.region.x_max = 31;
  const ScenarioConfig back = scenario_config_from_json(to_json(c));
  EXPECT_EQ(back.initial_states, c.initial_states);
  EXPECT_EQ(back.e_lambda, 7.5);
  EXPECT_EQ(back.seed, 42u);
  EXPECT_EQ(back.region, c.region);
  EXPECT_EQ(to_json(back), to_json(c));
}

TEST(ScenarioConfig, JsonRejectsUnknownAndBadFields) {
  EXPECT_THROW(scenario_config_from_json(R"({"p_dd": 0.5})"), ConfigError);
  try {
    scenario_config_from_json(R"({"p_d": 1.5})");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "p_d");
  }
  EXPECT_THROW(scenario_config_from_json("{not json"), ConfigError);
  const ScenarioConfig partial = scenario_config_from_json(R"({"e_lambda": 5})");
  EXPECT_EQ(partial.e_lambda, 5.0);
  EXPECT_EQ(partial.num_targets, 5);
}

TEST(Scan, ValidateRejectsDuplicateTargetLabels) {
  Scan s;
  s.measurements = {Vec2(1, 1), Vec2(2, 2)};
  s.origins = std::vector<Origin>{Origin::target(TargetId{0}), Origin::target(TargetId{0})};
  EXPECT_THROW(s.validate(), ContractViolation);
  (*s.origins)[1] = Origin::clutter();
  EXPECT_NO_THROW(s.validate());
  s.origins->pop_back();
  EXPECT_THROW(s.validate(), ContractViolation);
}

TEST(Origin, CodeRoundTrip) {
  EXPECT_EQ(Origin::from_code(-1), Origin::clutter());
  EXPECT_EQ(Origin::from_code(3).target().value, 3);
  EXPECT_EQ(Origin::clutter().code(), -1);
}

TEST(Assignment, FromTrackMapDerivesUnassignedSets) {
  const Assignment a = Assignment::from_track_map({2, std::nullopt, 0}, 4);
  EXPECT_TRUE(a.valid());
  EXPECT_EQ(a.pairs(), (std::vector<Assignment::Pair>{{0, 2}, {2, 0}}));
  EXPECT_EQ(a.unassigned_tracks(), std::vector<std::size_t>{1});
  EXPECT_EQ(a.unassigned_measurements(), (std::vector<std::size_t>{1, 3}));
  EXPECT_EQ(a.measurement_of(0), 2u);
  EXPECT_FALSE(a.measurement_of(1).has_value());
  EXPECT_THROW(Assignment::from_track_map({1, 1}, 3), ContractViolation);
  EXPECT_THROW(Assignment::from_track_map({5}, 3), ContractViolation);
}

TEST(AssocProbabilities, ValidateChecksRowsAndRange) {
  AssocProbabilities p{Eigen::MatrixXd(2, 3)};
  p.rows << 0.2, 0.3, 0.5, 0.0, 0.0, 1.0;
  EXPECT_NO_THROW(p.validate());
  p.rows(0, 0) = 0.3;
  EXPECT_THROW(p.validate(), ContractViolation);
  p.rows << -0.1, 0.6, 0.5, 0, 0, 1;
  EXPECT_THROW(p.validate(), ContractViolation);
}

TEST(HardAssignment, MaximisesSummedProbability) {
  AssocProbabilities p{Eigen::MatrixXd(2, 3)};
  // Greedy row-by-row would give track 0 measurement 0 and leave track 1 worse off.
  p.rows << 0.6, 0.4, 0.0,
            0.9, 0.05, 0.05;
  const Assignment a = hard_assignment_from_probs(p);
  EXPECT_EQ(a.measurement_of(0), 1u);
  EXPECT_EQ(a.measurement_of(1), 0u);
}

TEST(HardAssignment, MissWinsWhenMostLikely) {
  AssocProbabilities p{Eigen::MatrixXd(2, 2)};
  p.rows << 0.2, 0.8,
            0.7, 0.3;
  const Assignment a = hard_assignment_from_probs(p);
  EXPECT_FALSE(a.measurement_of(0).has_value());
  EXPECT_EQ(a.measurement_of(1), 0u);
}

TEST(HardAssignment, NoMeasurements) {
  AssocProbabilities p{Eigen::MatrixXd::Ones(3, 1)};
  const Assignment a = hard_assignment_from_probs(p);
  EXPECT_EQ(a.unassigned_tracks().size(), 3u);
}
