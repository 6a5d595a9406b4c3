#pragma once

#include <cstddef>
#include <vector>

#include "bitalloc/model.hpp"

namespace bitalloc {

/// Threshold and bit loading for one data set at a fixed duration.
struct WaterfillResult {
  double threshold = 0.0;       // lambda_k; 0 for an empty set
  double log2_threshold = 0.0;  // exact log2(lambda_k); -inf for an empty set
  std::vector<double> bits;
  std::vector<std::size_t> active_set;  // 0-based positions, ascending
  int iterations = 0;

  double total_bits() const;
};

/// Bits per subchannel of a water level `threshold` held for `duration_s`.
std::vector<double> bits_from_threshold(double threshold, double duration_s,
                                        const ChannelProfile& channel);

/// Aggregate rate (bits/s) at a water level: the left side of the threshold
/// equation.
double rate_from_threshold(double threshold, const ChannelProfile& channel);

/// Active-set water-filling: starts from every usable subchannel, computes
/// the level in closed form over the current set and drops subchannels whose
/// level is at or above it, until the set is stable. Pruned subchannels are
/// never re-admitted.
WaterfillResult solve_threshold(double total_bits, double duration_s,
                                const ChannelProfile& channel);

SetAllocation to_allocation(const WaterfillResult& wf, double duration_s,
                            const ChannelProfile& channel);

}  // namespace bitalloc
