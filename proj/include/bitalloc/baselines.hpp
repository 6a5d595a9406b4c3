#pragma once

#include <span>

#include "bitalloc/model.hpp"

namespace bitalloc {

/// Splits each set's bits evenly over the usable subchannels (p_n < 1),
/// ignoring subchannel quality, at the given per-set durations. Thresholds
/// are left at 0 and no multipliers are produced.
Solution equal_bit_allocation(const ProblemSpec& problem, std::span<const double> durations);

/// Same channel with every outage probability set to 0.
ChannelProfile strip_impairments(const ChannelProfile& channel);

}  // namespace bitalloc
