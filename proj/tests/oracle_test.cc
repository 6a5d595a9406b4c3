#include "bitalloc/oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bitalloc/duration.hpp"
#include "bitalloc/errors.hpp"
#include "bitalloc/multi_delay.hpp"
#include "bitalloc/waterfill.hpp"
#include "test_util.hpp"

namespace bitalloc {
namespace {

using std::numbers::ln2;
using testing::make_channel;
using testing::rel_diff;

TEST(ThresholdByRootfind, SingleSubchannelClosedForm) {
  const double g = 4e-9, q = 2e4, t = 0.8, b = 24414.0;
  const ChannelProfile ch = make_channel(b, {g}, {});
  const double lam = oracle::threshold_by_rootfind(q, t, ch);
  EXPECT_LT(rel_diff(lam, g * ln2 * std::exp2(q / (t * b))), 1e-10);
}

TEST(ThresholdByRootfind, JustPastSecondActivation) {
  const double b = 1000.0;
  const ChannelProfile ch = make_channel(b, {1e-9, 8e-9, 1e-6}, {0.0, 0.2, 0.0});
  const double a1 = 1e-9 * ln2, a2 = 8e-9 * ln2 / 0.8;
  const double boundary_rate = b * std::log2(a2 / a1);
  const double rate = boundary_rate * (1.0 + 1e-6);
  const double lam = oracle::threshold_by_rootfind(rate, 1.0, ch);
  EXPECT_GT(lam, a2);
  EXPECT_LT(lam, a2 * (1.0 + 1e-5));
  EXPECT_LT(rel_diff(rate_from_threshold(lam, ch), rate), 1e-10);
  EXPECT_EQ(solve_threshold(rate, 1.0, ch).active_set, (std::vector<std::size_t>{0, 1}));
}

TEST(ThresholdByRootfind, AgreesWithActiveSetIteration) {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 64);
    const ChannelProfile ch = testing::random_channel(rng, n, 24414.0, 1e-11, 1e-6, 0.3);
    const double t = testing::log_uniform(rng, 0.01, 5.0);
    const double q = testing::bits_for_load(ch, t, testing::log_uniform(rng, 0.01, 30.0));
    EXPECT_LT(rel_diff(oracle::threshold_by_rootfind(q, t, ch), solve_threshold(q, t, ch).threshold),
              1e-8);
  }
}

TEST(ThresholdByRootfind, Errors) {
  const ChannelProfile ch = make_channel(1.0, {1.0}, {});
  EXPECT_THROW(oracle::threshold_by_rootfind(5000.0, 1.0, ch), RateOverflowError);
  EXPECT_THROW(oracle::threshold_by_rootfind(0.0, 1.0, ch), InvalidInput);
  EXPECT_THROW(oracle::threshold_by_rootfind(1.0, 1.0, make_channel(1.0, {1.0}, {1.0})),
               InfeasibleError);
}

TEST(BruteForce, SingleSetIsWaterfilling) {
  const ChannelProfile ch = make_channel(1000.0, {1e-9, 3e-9}, {0.05, 0.0});
  const ProblemSpec problem(ch, {{4000.0, 1.2}});
  const Solution s = oracle::brute_force_durations(problem);
  EXPECT_EQ(s.allocations[0].duration_s, 1.2);
  const WaterfillResult wf = solve_threshold(4000.0, 1.2, ch);
  EXPECT_DOUBLE_EQ(s.total_energy_j, to_allocation(wf, 1.2, ch).total_energy());
}

TEST(BruteForce, SymmetricPairSplitsEvenly) {
  const ChannelProfile ch = make_channel(1000.0, {1e-9, 3e-9, 7e-9}, {0.05, 0.0, 0.1});
  const ProblemSpec problem(ch, {{3000.0, 2.0}, {3000.0, 2.0}});
  const Solution s = oracle::brute_force_durations(problem);
  EXPECT_NEAR(s.allocations[0].duration_s, 1.0, 1e-6);
}

TEST(BruteForce, MatchesTwoSetSolver) {
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 32);
    const ChannelProfile ch = testing::random_channel(rng, n);
    const double t2 = testing::uniform(rng, 0.5, 3.0);
    const double t1 = testing::uniform(rng, 0.05, 1.0) * t2;
    const double q1 = testing::bits_for_load(ch, t2, testing::log_uniform(rng, 0.05, 3.0));
    const double q2 = testing::bits_for_load(ch, t2, testing::log_uniform(rng, 0.05, 3.0));
    const ProblemSpec problem(ch, {{q1, t1}, {q2, t2}});
    const Solution ref = oracle::brute_force_durations(problem);
    const double mine = solve_two_sets(q1, q2, t1, t2, ch).total_energy(ch);
    EXPECT_LT(rel_diff(ref.total_energy_j, mine), 1e-6);
    EXPECT_TRUE(check_feasibility(problem, ref).ok());
  }
}

TEST(BruteForce, Guards) {
  const ChannelProfile ch = make_channel(1.0, {1.0}, {});
  const ProblemSpec five(ch, {{1, 1}, {1, 1}, {1, 1}, {1, 1}, {1, 1}});
  EXPECT_THROW(oracle::brute_force_durations(five), InvalidInput);
  const ProblemSpec one(ch, {{1, 1}});
  EXPECT_THROW(oracle::brute_force_durations(one, {.grid_points_per_axis = 50}), InvalidInput);
}

TEST(BruteForce, KktResidualSmallAtMinimizer) {
  std::mt19937_64 rng(107);
  for (int trial = 0; trial < 6; ++trial) {
    const ChannelProfile ch = testing::random_channel(rng, 8);
    const ProblemSpec problem(ch, {{testing::bits_for_load(ch, 1.0, 0.5), 0.6},
                                   {testing::bits_for_load(ch, 1.0, 0.3), 1.2},
                                   {testing::bits_for_load(ch, 1.0, 0.8), 2.0}});
    const Solution ref = oracle::brute_force_durations(problem, {.grid_points_per_axis = 100});
    EXPECT_LT(oracle::kkt_residuals(problem, ref).max_abs_residual, 1e-4);
  }
}

TEST(KktResiduals, TwoSetSolutionsCertify) {
  std::mt19937_64 rng(109);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 64);
    const ChannelProfile ch = testing::random_channel(rng, n);
    const double t2 = testing::uniform(rng, 0.5, 3.0);
    const double t1 = testing::uniform(rng, 0.05, 1.0) * t2;
    const ProblemSpec problem(
        ch, {{testing::bits_for_load(ch, t2, testing::log_uniform(rng, 0.05, 3.0)), t1},
             {testing::bits_for_load(ch, t2, testing::log_uniform(rng, 0.05, 3.0)), t2}});
    const oracle::KktReport r = oracle::kkt_residuals(problem, solve(problem));
    EXPECT_TRUE(r.multipliers_checked);
    EXPECT_LT(r.max_abs_residual, 1e-6) << "trial " << trial;
    for (bool ok : r.dual_feasibility_flags) EXPECT_TRUE(ok);
  }
}

TEST(KktResiduals, SingleSetPasses) {
  const ChannelProfile ch = make_channel(1000.0, {1e-9, 3e-9, 1e-7}, {0.05, 0.0, 0.1});
  const ProblemSpec problem(ch, {{6000.0, 1.0}});
  const oracle::KktReport r = oracle::kkt_residuals(problem, solve(problem));
  EXPECT_LT(r.max_abs_residual, 1e-9);
  ASSERT_EQ(r.stationarity_residuals.size(), 1u);
  ASSERT_EQ(r.duration_stationarity_residuals.size(), 1u);
}

TEST(KktResiduals, PerturbedBitsAreFlagged) {
  const ChannelProfile ch = make_channel(1000.0, {1e-9, 3e-9, 5e-9}, {0.05, 0.0, 0.1});
  const ProblemSpec problem(ch, {{9000.0, 1.0}});
  Solution s = solve(problem);
  SetAllocation& a = s.allocations[0];
  ASSERT_GE(a.active_set.size(), 2u);
  const double move = 0.01 * 9000.0;
  a.bits[a.active_set[0]] += move;
  a.bits[a.active_set[1]] -= move;
  a = make_allocation(ch, a.duration_s, a.threshold, a.bits);
  finalize_energy(s);
  EXPECT_GT(oracle::kkt_residuals(problem, s).max_abs_residual, 1e-3);
}

TEST(KktResiduals, MissingMultipliersReportedUnchecked) {
  const ChannelProfile ch = make_channel(1000.0, {1e-9, 3e-9}, {});
  const ProblemSpec problem(ch, {{3000.0, 1.0}, {3000.0, 2.0}});
  Solution s = solve(problem);
  s.betas.clear();
  const oracle::KktReport r = oracle::kkt_residuals(problem, s);
  EXPECT_FALSE(r.multipliers_checked);
  EXPECT_TRUE(r.duration_stationarity_residuals.empty());
}

}  // namespace
}  // namespace bitalloc
