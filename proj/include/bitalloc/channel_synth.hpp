#pragma once

#include <cstdint>
#include <vector>

#include "bitalloc/model.hpp"

namespace bitalloc {

struct OutageRange {
  int first = 1;  // 1-based, inclusive
  int last = 1;
  double outage_prob = 0.0;
};

struct SynthParams {
  int n_subchannels = 1;
  double spacing_hz = 1.0;
  double cnr_db_min = 0.0;  // CNR = |H|^2 / eta = 1 / G, in dB
  double cnr_db_max = 0.0;
  double decay_db_per_subchannel = 0.0;
  std::vector<OutageRange> outage_pattern;
  std::uint64_t seed = 0;
};

/// Synthetic profile: CNR uniform in dB over [cnr_db_min, cnr_db_max] (so G
/// is log-uniform), then lowered by decay_db_per_subchannel * (n - 1) to
/// mimic cable loss growing with frequency. Outage ranges must cover 1..N
/// exactly once.
///
/// Randomness is std::mt19937_64 seeded with `seed`; each draw maps the top
/// 53 bits of one output to [0, 1). Both steps are fully specified, so
/// profiles reproduce across platforms and languages.
ChannelProfile synth_channel(const SynthParams& params);

/// 735 subchannels at 24.414 kHz with p = 0.06 on 1..39 and 0.05 on 40..735,
/// CNR 70..100 dB with a 0.02 dB/subchannel roll-off.
SynthParams ofdm735_params(std::uint64_t seed);

/// Raises every subchannel's channel power by delta_db (G scaled by
/// 10^(-delta_db/10)).
ChannelProfile shift_cnr(const ChannelProfile& channel, double delta_db);

/// Multiplies every outage probability by `factor`; results above 1 are an
/// error.
ChannelProfile scale_outage(const ChannelProfile& channel, double factor);

}  // namespace bitalloc
