#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "bitalloc/model.hpp"

namespace bitalloc::testing {

inline ChannelProfile make_channel(double spacing_hz, const std::vector<double>& g,
                                   const std::vector<double>& p) {
  std::vector<Subchannel> subs;
  for (std::size_t i = 0; i < g.size(); ++i) {
    subs.push_back({static_cast<int>(i) + 1, g[i], p.empty() ? 0.0 : p[i]});
  }
  return ChannelProfile(spacing_hz, std::move(subs));
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

/// Random channel: G log-uniform over [g_lo, g_hi], p uniform over [0, p_hi].
inline ChannelProfile random_channel(std::mt19937_64& rng, int n, double spacing_hz = 24414.0,
                                     double g_lo = 1e-10, double g_hi = 1e-6, double p_hi = 0.1) {
  std::vector<double> g, p;
  for (int i = 0; i < n; ++i) {
    g.push_back(log_uniform(rng, g_lo, g_hi));
    p.push_back(uniform(rng, 0.0, p_hi));
  }
  return make_channel(spacing_hz, g, p);
}

/// Bits giving a per-subchannel exponent of roughly `bits_per_hz` on the
/// whole band for `duration_s`.
inline double bits_for_load(const ChannelProfile& ch, double duration_s, double bits_per_hz) {
  return bits_per_hz * duration_s * ch.spacing_hz() * static_cast<double>(ch.size());
}

inline double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace bitalloc::testing
