#include "bitalloc/baselines.hpp"

#include <gtest/gtest.h>

#include <random>

#include "bitalloc/channel_synth.hpp"
#include "bitalloc/errors.hpp"
#include "bitalloc/multi_delay.hpp"
#include "test_util.hpp"

namespace bitalloc {
namespace {

using testing::make_channel;
using testing::rel_diff;

TEST(EqualBit, UniformChannelMatchesWaterfilling) {
  const ChannelProfile ch = make_channel(1000.0, {2e-9, 2e-9, 2e-9, 2e-9}, {0.05, 0.05, 0.05, 0.05});
  const ProblemSpec problem(ch, {{5000.0, 1.0}, {3000.0, 2.0}});
  const Solution proposed = solve(problem);
  const std::vector<double> d{proposed.allocations[0].duration_s,
                              proposed.allocations[1].duration_s};
  const Solution base = equal_bit_allocation(problem, d);
  EXPECT_LT(rel_diff(base.total_energy_j, proposed.total_energy_j), 1e-12);
  for (std::size_t k = 0; k < 2; ++k) {
    for (std::size_t n = 0; n < 4; ++n) {
      EXPECT_NEAR(base.allocations[k].bits[n], proposed.allocations[k].bits[n], 1e-9);
    }
  }
}

TEST(EqualBit, StrictlyWorseOnUnequalPair) {
  const ChannelProfile ch = make_channel(1000.0, {1e-9, 1e-7}, {});
  const ProblemSpec problem(ch, {{2000.0, 1.0}});
  const Solution proposed = solve(problem);
  const std::vector<double> d{1.0};
  EXPECT_GT(equal_bit_allocation(problem, d).total_energy_j, proposed.total_energy_j);
}

TEST(EqualBit, IdleSetCostsNothing) {
  const ChannelProfile ch = make_channel(1000.0, {1e-9, 1e-7}, {});
  const ProblemSpec problem(ch, {{0.0, 1.0}, {1000.0, 2.0}});
  const std::vector<double> d{0.0, 2.0};
  const Solution base = equal_bit_allocation(problem, d);
  EXPECT_EQ(base.allocations[0].total_energy(), 0.0);
  EXPECT_GT(base.allocations[1].total_energy(), 0.0);
}

TEST(EqualBit, SkipsUnusableSubchannels) {
  const ChannelProfile ch = make_channel(1000.0, {1e-9, 1e-7, 1e-9}, {0.0, 1.0, 0.0});
  const ProblemSpec problem(ch, {{1000.0, 1.0}});
  const std::vector<double> d{1.0};
  const Solution base = equal_bit_allocation(problem, d);
  EXPECT_EQ(base.allocations[0].bits, (std::vector<double>{500.0, 0.0, 500.0}));
}

TEST(EqualBit, DimensionMismatch) {
  const ChannelProfile ch = make_channel(1.0, {1.0}, {});
  const ProblemSpec problem(ch, {{1.0, 1.0}});
  const std::vector<double> d{1.0, 1.0};
  EXPECT_THROW(equal_bit_allocation(problem, d), InvalidInput);
}

TEST(StripImpairments, ClearsOutage) {
  const ChannelProfile ideal = make_channel(1.0, {1.0, 2.0}, {0.0, 0.0});
  EXPECT_EQ(strip_impairments(ideal), ideal);
  const ChannelProfile ch = synth_channel(ofdm735_params(3));
  const ChannelProfile stripped = strip_impairments(ch);
  for (std::size_t n = 0; n < stripped.size(); ++n) {
    EXPECT_EQ(stripped[n].outage_prob, 0.0);
    EXPECT_EQ(stripped[n].inverse_cnr, ch[n].inverse_cnr);
  }
}

TEST(StripImpairments, NeverCostsMore) {
  std::mt19937_64 rng(113);
  for (int trial = 0; trial < 40; ++trial) {
    const ChannelProfile ch = testing::random_channel(rng, 16);
    const double q = testing::bits_for_load(ch, 2.0, testing::log_uniform(rng, 0.1, 3.0));
    const std::vector<DataSetSpec> sets{{0.4 * q, 1.0}, {0.6 * q, 2.0}};
    const double real = solve(ProblemSpec(ch, sets)).total_energy_j;
    const double ideal = solve(ProblemSpec(strip_impairments(ch), sets)).total_energy_j;
    EXPECT_LE(ideal, real);
  }
}

}  // namespace
}  // namespace bitalloc
