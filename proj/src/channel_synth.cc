#include "bitalloc/channel_synth.hpp"

#include <cmath>
#include <random>

#include "bitalloc/errors.hpp"

namespace bitalloc {

namespace {

double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

ChannelProfile synth_channel(const SynthParams& params) {
  const int n = params.n_subchannels;
  if (n < 1) throw InvalidInput("n_subchannels must be >= 1");
  if (!std::isfinite(params.cnr_db_min) || !std::isfinite(params.cnr_db_max) ||
      params.cnr_db_min > params.cnr_db_max) {
    throw InvalidInput("cnr_db range must be finite with min <= max");
  }
  if (!(params.decay_db_per_subchannel >= 0.0) ||
      !std::isfinite(params.decay_db_per_subchannel)) {
    throw InvalidInput("decay_db_per_subchannel must be finite and >= 0");
  }

  std::vector<double> outage(static_cast<std::size_t>(n), -1.0);
  for (const OutageRange& r : params.outage_pattern) {
    if (r.first < 1 || r.last > n || r.first > r.last) {
      throw InvalidInput("outage range " + std::to_string(r.first) + "-" +
                         std::to_string(r.last) + " outside 1.." + std::to_string(n));
    }
    for (int i = r.first; i <= r.last; ++i) {
      if (outage[i - 1] >= 0.0) {
        throw InvalidInput("subchannel " + std::to_string(i) + " covered by two outage ranges");
      }
      outage[i - 1] = r.outage_prob;
    }
  }
  for (int i = 1; i <= n; ++i) {
    if (outage[i - 1] < 0.0) {
      throw InvalidInput("subchannel " + std::to_string(i) + " not covered by the outage pattern");
    }
  }

  std::mt19937_64 rng(params.seed);
  std::vector<Subchannel> subs;
  subs.reserve(outage.size());
  const double span = params.cnr_db_max - params.cnr_db_min;
  for (int i = 1; i <= n; ++i) {
    const double cnr_db = params.cnr_db_min + span * unit_draw(rng) -
                          params.decay_db_per_subchannel * static_cast<double>(i - 1);
    subs.push_back({i, std::pow(10.0, -cnr_db / 10.0), outage[i - 1]});
  }
  return ChannelProfile(params.spacing_hz, std::move(subs));
}

SynthParams ofdm735_params(std::uint64_t seed) {
  SynthParams p;
  p.n_subchannels = 735;
  p.spacing_hz = 24414.0;
  p.cnr_db_min = 70.0;
  p.cnr_db_max = 100.0;
  p.decay_db_per_subchannel = 0.02;
  p.outage_pattern = {{1, 39, 0.06}, {40, 735, 0.05}};
  p.seed = seed;
  return p;
}

ChannelProfile shift_cnr(const ChannelProfile& channel, double delta_db) {
  if (!std::isfinite(delta_db)) throw InvalidInput("delta_db must be finite");
  const double factor = std::pow(10.0, -delta_db / 10.0);
  std::vector<Subchannel> subs = channel.subchannels();
  for (Subchannel& s : subs) s.inverse_cnr *= factor;
  return ChannelProfile(channel.spacing_hz(), std::move(subs));
}

ChannelProfile scale_outage(const ChannelProfile& channel, double factor) {
  if (!(factor >= 0.0) || !std::isfinite(factor)) {
    throw InvalidInput("outage scale must be finite and >= 0");
  }
  std::vector<Subchannel> subs = channel.subchannels();
  for (Subchannel& s : subs) {
    s.outage_prob *= factor;
    if (s.outage_prob > 1.0) {
      throw InvalidInput("outage scale pushes subchannel " + std::to_string(s.index) +
                         " above probability 1");
    }
  }
  return ChannelProfile(channel.spacing_hz(), std::move(subs));
}

}  // namespace bitalloc
