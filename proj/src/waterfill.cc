#include "bitalloc/waterfill.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "bitalloc/errors.hpp"

namespace bitalloc {

namespace {

// Margin below which (1-p)lambda/(G ln2) - 1 counts as zero.
constexpr double kActivationMargin = 1e-12;

// log2 of (1-p_n)lambda/(G_n ln2), i.e. the per-subchannel exponent
// Qbar/((1-p)tB) when active.
double exponent_at(double log2_threshold, const ChannelProfile& channel, std::size_t n) {
  return log2_threshold - channel.log2_level(n);
}

bool is_active(double log2_threshold, const ChannelProfile& channel, std::size_t n) {
  if (!channel.usable(n)) return false;
  // ratio - 1 > margin  <=>  exponent > log2(1 + margin)
  return std::exp2(exponent_at(log2_threshold, channel, n)) - 1.0 > kActivationMargin;
}

}  // namespace

double WaterfillResult::total_bits() const {
  return std::accumulate(bits.begin(), bits.end(), 0.0);
}

std::vector<double> bits_from_threshold(double threshold, double duration_s,
                                        const ChannelProfile& channel) {
  if (!(threshold > 0.0) || !std::isfinite(threshold)) {
    throw InvalidInput("threshold must be finite and > 0");
  }
  if (!(duration_s > 0.0) || !std::isfinite(duration_s)) {
    throw InvalidInput("duration_s must be finite and > 0");
  }
  const double log2_threshold = std::log2(threshold);
  const double tb = duration_s * channel.spacing_hz();
  std::vector<double> bits(channel.size(), 0.0);
  for (std::size_t n = 0; n < channel.size(); ++n) {
    if (is_active(log2_threshold, channel, n)) {
      bits[n] = tb * channel.weight(n) * exponent_at(log2_threshold, channel, n);
    }
  }
  return bits;
}

double rate_from_threshold(double threshold, const ChannelProfile& channel) {
  if (!(threshold > 0.0) || !std::isfinite(threshold)) {
    throw InvalidInput("threshold must be finite and > 0");
  }
  const double log2_threshold = std::log2(threshold);
  double sum = 0.0;
  for (std::size_t n = 0; n < channel.size(); ++n) {
    if (is_active(log2_threshold, channel, n)) {
      sum += channel.weight(n) * exponent_at(log2_threshold, channel, n);
    }
  }
  return channel.spacing_hz() * sum;
}

WaterfillResult solve_threshold(double total_bits, double duration_s,
                                const ChannelProfile& channel) {
  if (!(total_bits >= 0.0) || !std::isfinite(total_bits)) {
    throw InvalidInput("total_bits must be finite and >= 0");
  }
  if (!(duration_s > 0.0) || !std::isfinite(duration_s)) {
    throw InvalidInput("duration_s must be finite and > 0");
  }
  const std::size_t n_sub = channel.size();
  WaterfillResult result;
  result.bits.assign(n_sub, 0.0);
  if (total_bits == 0.0) {
    result.log2_threshold = -std::numeric_limits<double>::infinity();
    return result;
  }
  if (channel.usable_count() == 0) {
    throw InfeasibleError("no subchannel with outage_prob < 1");
  }

  const double normalized_rate = total_bits / (duration_s * channel.spacing_hz());
  std::vector<std::size_t> active;
  active.reserve(n_sub);
  for (std::size_t n = 0; n < n_sub; ++n) {
    if (channel.usable(n)) active.push_back(n);
  }

  const int max_passes = static_cast<int>(n_sub) + 1;
  double log2_threshold = 0.0;
  std::vector<std::size_t> kept;
  kept.reserve(n_sub);
  for (int pass = 1;; ++pass) {
    if (pass > max_passes) {
      throw InternalError("water-filling exceeded " + std::to_string(max_passes) + " passes");
    }
    double weight_sum = 0.0;
    double weighted_levels = 0.0;
    for (std::size_t n : active) {
      weight_sum += channel.weight(n);
      weighted_levels += channel.weight(n) * channel.log2_level(n);
    }
    // log2(lambda) = (Q/(tB) + sum w log2(level)) / sum w
    log2_threshold = (normalized_rate + weighted_levels) / weight_sum;

    kept.clear();
    for (std::size_t n : active) {
      if (is_active(log2_threshold, channel, n)) kept.push_back(n);
    }
    result.iterations = pass;
    if (kept.size() == active.size()) break;
    active.swap(kept);
    if (active.empty()) {
      throw InternalError("water-filling pruned every subchannel");
    }
  }

  const double tb = duration_s * channel.spacing_hz();
  double max_exponent = 0.0;
  for (std::size_t n : active) {
    const double x = exponent_at(log2_threshold, channel, n);
    max_exponent = std::max(max_exponent, x);
    result.bits[n] = tb * channel.weight(n) * x;
  }
  if (max_exponent > kExponentCap) {
    std::ostringstream msg;
    msg << "rate " << total_bits / duration_s << " bits/s needs exponent " << max_exponent
        << " > " << kExponentCap;
    throw RateOverflowError(msg.str());
  }
  result.active_set = std::move(active);
  result.log2_threshold = log2_threshold;
  result.threshold = std::exp2(log2_threshold);
  return result;
}

SetAllocation to_allocation(const WaterfillResult& wf, double duration_s,
                            const ChannelProfile& channel) {
  return make_allocation(channel, duration_s, wf.threshold, wf.bits);
}

}  // namespace bitalloc
