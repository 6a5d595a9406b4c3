#include "bitalloc/baselines.hpp"

#include <vector>

#include "bitalloc/errors.hpp"

namespace bitalloc {

Solution equal_bit_allocation(const ProblemSpec& problem, std::span<const double> durations) {
  const ChannelProfile& channel = problem.channel();
  const auto& sets = problem.sets();
  if (durations.size() != sets.size()) {
    throw InvalidInput("need one duration per data set");
  }
  const std::size_t usable = channel.usable_count();
  Solution solution;
  solution.diagnostics.waterfill_iterations.assign(sets.size(), 0);
  for (std::size_t k = 0; k < sets.size(); ++k) {
    std::vector<double> bits(channel.size(), 0.0);
    if (sets[k].total_bits > 0.0) {
      if (usable == 0) throw InfeasibleError("no usable subchannel for the equal-bit split");
      if (!(durations[k] > 0.0)) {
        throw InvalidInput("set " + std::to_string(k + 1) + " carries bits but has no duration");
      }
      const double share = sets[k].total_bits / static_cast<double>(usable);
      for (std::size_t n = 0; n < channel.size(); ++n) {
        if (channel.usable(n)) bits[n] = share;
      }
    }
    solution.allocations.push_back(make_allocation(channel, durations[k], 0.0, std::move(bits)));
  }
  finalize_energy(solution);
  return solution;
}

ChannelProfile strip_impairments(const ChannelProfile& channel) {
  std::vector<Subchannel> subs = channel.subchannels();
  for (Subchannel& s : subs) s.outage_prob = 0.0;
  return ChannelProfile(channel.spacing_hz(), std::move(subs));
}

}  // namespace bitalloc
