#include <mudgain/montecarlo.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

namespace {

using namespace mudgain;

TEST(SampleChannelsTest, DeterministicAndOrderFree) {
  const auto a = sample_channels(4, 17, 42);
  const auto b = sample_channels(4, 17, 42);
  EXPECT_EQ(a.gains, b.gains);
  const auto longer = sample_channels(9, 17, 42);
  for (std::size_t k = 0; k < 4; ++k) EXPECT_EQ(a.gains[k], longer.gains[k]);
  EXPECT_NE(sample_channels(4, 18, 42).gains, a.gains);
  EXPECT_NE(sample_channels(4, 17, 43).gains, a.gains);
  for (double h : longer.gains) EXPECT_GE(h, 0.0);
}

TEST(SampleChannelsTest, ExponentialMoments) {
  // Exp(1): mean 1, variance 1, so 3 sigma over 1e6 draws is 0.003.
  double sum = 0.0;
  double below_one = 0.0;
  const int blocks = 250'000;
  for (int t = 0; t < blocks; ++t) {
    for (double h : sample_channels(4, t, 2024).gains) {
      sum += h;
      below_one += h < 1.0;
    }
  }
  EXPECT_NEAR(sum / (4.0 * blocks), 1.0, 0.003);
  EXPECT_NEAR(below_one / (4.0 * blocks), 1.0 - std::exp(-1.0), 0.0015);
}

TEST(EstimateOutageTest, DeterministicAcrossWorkerCounts) {
  const ScenarioConfig cfg{3.0, 6, 250.0};
  const auto one = estimate_individual_outage(cfg, {9, 40'000, 1});
  for (unsigned w : {2u, 4u, 7u}) {
    const auto many = estimate_individual_outage(cfg, {9, 40'000, w});
    EXPECT_EQ(one.outage_user_blocks, many.outage_user_blocks);
    EXPECT_EQ(one.eps_hat, many.eps_hat);
  }
}

TEST(EstimateOutageTest, IndependentOfTotalUserCount) {
  for (unsigned k : {3u, 6u, 30u}) {
    const auto a = estimate_individual_outage(ScenarioConfig{4.0, 3, 150.0}, {3, 20'000});
    const auto b = estimate_individual_outage(ScenarioConfig{4.0, 3, 150.0, k}, {3, 20'000});
    EXPECT_EQ(a.outage_user_blocks, b.outage_user_blocks);
  }
}

TEST(EstimateOutageTest, ExhaustivePathAgrees) {
  for (unsigned j : {1u, 3u, 6u}) {
    const ScenarioConfig cfg{3.0, j, from_db(24.0)};
    const TrialPlan plan{77, 20'000};
    EXPECT_EQ(estimate_individual_outage(cfg, plan).outage_user_blocks,
              estimate_individual_outage(cfg, plan, DecodePath::exhaustive).outage_user_blocks);
  }
  EXPECT_THROW(estimate_individual_outage(ScenarioConfig{3.0, 30, 100.0}, {1, 10},
                                          DecodePath::exhaustive),
               RegionSizeError);
}

TEST(EstimateOutageTest, HugePowerNeverFails) {
  for (unsigned j : {1u, 10u, 100u}) {
    EXPECT_EQ(estimate_individual_outage(ScenarioConfig{9.0, j, 1e12}, {5, 2'000}).eps_hat, 0.0);
  }
}

TEST(EstimateOutageTest, SingleUserMatchesClosedForm) {
  const double p = 696.494;
  const auto est = estimate_individual_outage(ScenarioConfig{3.0, 1, p}, {0, 1'000'000});
  const double truth = oma_outage(3.0, p);
  const double sigma = std::sqrt(truth * (1 - truth) / 1e6);
  EXPECT_NEAR(est.eps_hat, truth, 3 * sigma);
  EXPECT_EQ(est.user_blocks, 1'000'000u);
}

TEST(EstimateOutageTest, SuperpositionBeatsOrthogonalAtEqualPower) {
  for (double p_db : {20.0, 24.0, 28.0}) {
    const TrialPlan plan{13, 200'000};
    const auto oma = estimate_individual_outage(ScenarioConfig::from_power_db(3.0, 1, p_db), plan);
    const auto noma = estimate_individual_outage(ScenarioConfig::from_power_db(3.0, 2, p_db), plan);
    EXPECT_LT(noma.eps_hat, oma.eps_hat) << p_db;
  }
}

TEST(EstimateOutageTest, WilsonCoverageAtSingleUser) {
  // 95% intervals should cover the closed-form truth in at least 90% of runs.
  const double p = oma_required_power(3.0, 0.01);
  const double truth = oma_outage(3.0, p);
  int covered = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const auto est = estimate_individual_outage(ScenarioConfig{3.0, 1, p}, {seed * 7919, 20'000});
    covered += est.wilson.lower() <= truth && truth <= est.wilson.upper();
  }
  EXPECT_GE(covered, 180);
}

TEST(OutageProfileTest, MatchesDirectEstimates) {
  std::mt19937_64 rng{3};
  std::uniform_real_distribution<double> db(18.0, 30.0);
  for (unsigned j : {1u, 2u, 5u, 12u}) {
    const TrialPlan plan{31, 20'000, 3};
    const OutageProfile profile{3.0, j, plan, from_db(18.0), from_db(30.0)};
    for (int i = 0; i < 6; ++i) {
      const double p = from_db(db(rng));
      EXPECT_EQ(profile.outage_count(p),
                estimate_individual_outage(ScenarioConfig{3.0, j, p}, plan).outage_user_blocks)
          << "J=" << j << " p=" << p;
    }
  }
}

TEST(OutageProfileTest, NonIncreasingInPower) {
  const OutageProfile profile{6.0, 8, {4, 50'000, 2}, from_db(20.0), from_db(40.0)};
  std::mt19937_64 rng{8};
  std::uniform_real_distribution<double> db(20.0, 40.0);
  for (int i = 0; i < 500; ++i) {
    double a = from_db(db(rng));
    double b = from_db(db(rng));
    if (a > b) std::swap(a, b);
    EXPECT_GE(profile.outage_count(a), profile.outage_count(b));
  }
  EXPECT_THROW(profile.outage_count(from_db(19.0)), std::out_of_range);
  EXPECT_THROW(profile.outage_count(from_db(41.0)), std::out_of_range);
}

TEST(OutageProfileTest, IndependentOfWorkerCount) {
  const OutageProfile a{3.0, 10, {5, 30'000, 1}, from_db(22.0), from_db(26.0)};
  const OutageProfile b{3.0, 10, {5, 30'000, 5}, from_db(22.0), from_db(26.0)};
  for (double p_db = 22.0; p_db <= 26.0; p_db += 0.25) {
    EXPECT_EQ(a.outage_count(from_db(p_db)), b.outage_count(from_db(p_db)));
  }
}

TEST(RequiredPowerTest, SingleUserMatchesClosedForm) {
  const TrialPlan plan{0, 1'000'000};
  EXPECT_NEAR(required_power(3.0, 1, 0.01, plan, 0.01).power_db, 28.43, 0.1);
  EXPECT_NEAR(required_power(6.0, 1, 0.01, plan, 0.01).power_db, 37.97, 0.1);
}

TEST(RequiredPowerTest, ResultIsSmallestPowerMeetingTarget) {
  const TrialPlan plan{12, 100'000};
  const auto rp = required_power(3.0, 4, 0.01, plan, 0.005);
  EXPECT_LE(rp.at_power.eps_hat, 0.01);
  const auto below = estimate_individual_outage(
      ScenarioConfig::from_power_db(3.0, 4, rp.power_db - 0.006), plan);
  EXPECT_GT(below.eps_hat, 0.01);
  EXPECT_LE(rp.ci_low_db, rp.power_db);
  EXPECT_GE(rp.ci_high_db, rp.power_db);
}

TEST(RequiredPowerTest, NonIncreasingInSuperposition) {
  const TrialPlan plan{0, 200'000};
  double prev = 1e9;
  for (unsigned j : {1u, 2u, 4u, 10u, 50u, 100u}) {
    const double p = required_power(3.0, j, 0.01, plan, 0.01).power_db;
    EXPECT_LE(p, prev) << "J=" << j;
    EXPECT_GE(p, to_db(noma_power_lower_bound(3.0, 0.01)));
    prev = p;
  }
}

TEST(RequiredPowerTest, BracketFailure) {
  const TrialPlan plan{1, 20'000};
  EXPECT_THROW(required_power(3.0, 1, 0.01, plan, 0.01, {-2.0}), BracketError);
  EXPECT_THROW(required_power(3.0, 1, 0.01, plan, 0.0), std::invalid_argument);
}

TEST(MudGainCurveTest, AnchorAndBound) {
  const std::vector<unsigned> js{1, 2, 4};
  const auto curve = mud_gain_curve(3.0, 0.01, js, {0, 200'000}, 0.01);
  ASSERT_EQ(curve.size(), 3u);
  EXPECT_EQ(curve[0].point.gain_db, 0.0);
  EXPECT_LT(curve[1].point.gain_db, curve[2].point.gain_db);
  for (const auto& g : curve) {
    EXPECT_LE(g.point.gain_db, g.upper_bound_db + 0.2);
    EXPECT_NEAR(g.upper_bound_db, mud_gain_upper_bound(3.0, 0.01), 1e-12);
    EXPECT_GE(g.ci_db, 0.0);
  }
  EXPECT_THROW(mud_gain_curve(3.0, 0.01, std::vector<unsigned>{}, {0, 10}, 0.01),
               std::invalid_argument);
}

TEST(BoundComparisonTest, DominatesLowerBound) {
  const std::vector<double> grid{15, 18, 21, 24, 27, 30, 200};
  const std::vector<unsigned> js{1, 4, 20};
  const auto rows = bound_comparison_curve(3.0, grid, js, {6, 50'000});
  ASSERT_EQ(rows.size(), grid.size() * js.size());
  for (const auto& r : rows) {
    EXPECT_GE(r.estimate.eps_hat + r.estimate.ci_halfwidth_95, r.eps_lower_bound);
    if (r.p_db == 200) {
      EXPECT_EQ(r.estimate.eps_hat, 0.0);
      EXPECT_LT(r.eps_lower_bound, 1e-15);
    }
  }
}

TEST(BoundComparisonTest, MatchesDirectEstimates) {
  const std::vector<double> grid{26.0, 20.0, 23.5};
  const std::vector<unsigned> js{2, 7};
  const TrialPlan plan{17, 20'000, 2};
  const auto rows = bound_comparison_curve(4.0, grid, js, plan);
  for (const auto& r : rows) {
    const auto direct =
        estimate_individual_outage(ScenarioConfig::from_power_db(4.0, r.j_users, r.p_db), plan);
    EXPECT_EQ(r.estimate.outage_user_blocks, direct.outage_user_blocks);
  }
}

TEST(BoundComparisonTest, ManyUsersApproachBoundNearTarget) {
  const std::vector<double> grid{to_db(noma_power_lower_bound(3.0, 0.01))};
  const std::vector<unsigned> js{100};
  const auto rows = bound_comparison_curve(3.0, grid, js, {0, 200'000});
  EXPECT_GE(rows[0].estimate.eps_hat, 0.01);
  EXPECT_LE(rows[0].estimate.eps_hat, 0.03);
}

}  // namespace
