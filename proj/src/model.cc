#include "bitalloc/model.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "bitalloc/errors.hpp"

namespace bitalloc {

namespace {

void check_positive_finite(double v, const char* name) {
  if (!std::isfinite(v) || v <= 0.0) {
    throw InvalidInput(std::string(name) + " must be finite and > 0");
  }
}

}  // namespace

ChannelProfile::ChannelProfile(double spacing_hz, std::vector<Subchannel> subchannels)
    : spacing_hz_(spacing_hz), subchannels_(std::move(subchannels)) {
  check_positive_finite(spacing_hz_, "spacing_hz");
  if (subchannels_.empty()) throw InvalidInput("channel needs at least one subchannel");
  weight_.reserve(subchannels_.size());
  log2_level_.reserve(subchannels_.size());
  for (std::size_t i = 0; i < subchannels_.size(); ++i) {
    const Subchannel& s = subchannels_[i];
    if (s.index != static_cast<int>(i) + 1) {
      throw InvalidInput("subchannel indices must run 1..N without gaps; position " +
                         std::to_string(i + 1) + " has index " + std::to_string(s.index));
    }
    if (!std::isfinite(s.inverse_cnr) || s.inverse_cnr <= 0.0) {
      throw InvalidInput("subchannel " + std::to_string(s.index) +
                         ": inverse_cnr must be finite and > 0");
    }
    if (!(s.outage_prob >= 0.0 && s.outage_prob <= 1.0)) {
      throw InvalidInput("subchannel " + std::to_string(s.index) +
                         ": outage_prob must lie in [0, 1]");
    }
    const double w = 1.0 - s.outage_prob;
    weight_.push_back(w);
    if (w > 0.0) {
      log2_level_.push_back(std::log2(s.inverse_cnr) + std::log2(std::numbers::ln2) - std::log2(w));
      ++usable_count_;
    } else {
      log2_level_.push_back(std::numeric_limits<double>::infinity());
    }
  }
}

bool operator==(const Subchannel& a, const Subchannel& b) {
  return a.index == b.index && a.inverse_cnr == b.inverse_cnr && a.outage_prob == b.outage_prob;
}

bool operator==(const ChannelProfile& a, const ChannelProfile& b) {
  return a.spacing_hz_ == b.spacing_hz_ && a.subchannels_ == b.subchannels_;
}

ProblemSpec::ProblemSpec(ChannelProfile channel, std::vector<DataSetSpec> sets)
    : channel_(std::move(channel)), sets_(std::move(sets)) {
  if (sets_.empty()) throw InvalidInput("problem needs at least one data set");
  for (std::size_t k = 0; k < sets_.size(); ++k) {
    const DataSetSpec& s = sets_[k];
    if (!std::isfinite(s.total_bits) || s.total_bits < 0.0) {
      throw InvalidInput("set " + std::to_string(k + 1) + ": total_bits must be finite and >= 0");
    }
    check_positive_finite(s.deadline_s, "deadline_s");
    if (k > 0 && s.deadline_s < sets_[k - 1].deadline_s) {
      throw InvalidInput("sets must be sorted by nondecreasing deadline (set " +
                         std::to_string(k + 1) + ")");
    }
    if (s.total_bits > 0.0 && channel_.usable_count() == 0) {
      throw InfeasibleError("set " + std::to_string(k + 1) +
                            " carries bits but every subchannel has outage_prob = 1");
    }
  }
}

double SetAllocation::total_bits() const { return std::accumulate(bits.begin(), bits.end(), 0.0); }

double SetAllocation::total_energy() const {
  return std::accumulate(energies.begin(), energies.end(), 0.0);
}

double energy_for_bits(double bits, double duration_s, double spacing_hz, double inverse_cnr,
                       double outage_prob) {
  check_positive_finite(duration_s, "duration_s");
  check_positive_finite(spacing_hz, "spacing_hz");
  check_positive_finite(inverse_cnr, "inverse_cnr");
  if (!(bits >= 0.0) || !std::isfinite(bits)) throw InvalidInput("bits must be finite and >= 0");
  if (!(outage_prob >= 0.0 && outage_prob <= 1.0)) {
    throw InvalidInput("outage_prob must lie in [0, 1]");
  }
  if (bits == 0.0) return 0.0;
  if (outage_prob == 1.0) {
    throw DomainError("positive bits on a subchannel with outage_prob = 1");
  }
  const double exponent = bits / ((1.0 - outage_prob) * duration_s * spacing_hz);
  if (exponent > kExponentCap) {
    std::ostringstream msg;
    msg << "exponent " << exponent << " exceeds cap " << kExponentCap;
    throw RateOverflowError(msg.str());
  }
  return std::expm1(exponent * std::numbers::ln2) * duration_s * spacing_hz * inverse_cnr;
}

double bits_for_energy(double energy_j, double duration_s, double spacing_hz, double inverse_cnr,
                       double outage_prob) {
  check_positive_finite(duration_s, "duration_s");
  check_positive_finite(spacing_hz, "spacing_hz");
  check_positive_finite(inverse_cnr, "inverse_cnr");
  if (!(energy_j >= 0.0) || !std::isfinite(energy_j)) {
    throw InvalidInput("energy must be finite and >= 0");
  }
  if (!(outage_prob >= 0.0 && outage_prob <= 1.0)) {
    throw InvalidInput("outage_prob must lie in [0, 1]");
  }
  const double tb = duration_s * spacing_hz;
  return (1.0 - outage_prob) * tb * std::log1p(energy_j / (tb * inverse_cnr)) / std::numbers::ln2;
}

SetAllocation make_allocation(const ChannelProfile& channel, double duration_s, double threshold,
                              std::vector<double> bits) {
  SetAllocation a;
  a.duration_s = duration_s;
  a.threshold = threshold;
  a.energies.assign(bits.size(), 0.0);
  for (std::size_t n = 0; n < bits.size(); ++n) {
    if (bits[n] > 0.0) {
      a.active_set.push_back(n);
      a.energies[n] = energy_for_bits(bits[n], duration_s, channel.spacing_hz(),
                                      channel[n].inverse_cnr, channel[n].outage_prob);
    }
  }
  a.bits = std::move(bits);
  return a;
}

void finalize_energy(Solution& solution) {
  double total = 0.0;
  for (const SetAllocation& a : solution.allocations) total += a.total_energy();
  solution.total_energy_j = total;
}

FeasibilityReport check_feasibility(const ProblemSpec& problem, const Solution& solution,
                                    FeasibilityTolerance tol) {
  const auto& sets = problem.sets();
  if (solution.allocations.size() != sets.size()) {
    throw InvalidInput("solution has " + std::to_string(solution.allocations.size()) +
                       " allocations for " + std::to_string(sets.size()) + " sets");
  }
  FeasibilityReport report;
  double cumulative = 0.0;
  for (std::size_t k = 0; k < sets.size(); ++k) {
    const SetAllocation& a = solution.allocations[k];
    if (a.bits.size() != problem.channel().size()) {
      throw InvalidInput("allocation " + std::to_string(k + 1) + " has wrong subchannel count");
    }
    if (a.duration_s < 0.0) {
      report.violations.push_back({Violation::Kind::kNegativeDuration, k + 1, -a.duration_s});
    }
    const double shortfall = sets[k].total_bits - a.total_bits();
    if (shortfall > tol.bits_relative * sets[k].total_bits) {
      report.violations.push_back({Violation::Kind::kBits, k + 1, shortfall});
    }
    cumulative += a.duration_s;
    const double overrun = cumulative - sets[k].deadline_s;
    if (overrun > tol.seconds_absolute) {
      report.violations.push_back({Violation::Kind::kDelay, k + 1, overrun});
    }
  }
  return report;
}

std::string to_string(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::kBits:
      return "bits";
    case Violation::Kind::kDelay:
      return "delay";
    case Violation::Kind::kNegativeDuration:
      return "negative_duration";
  }
  return "unknown";
}

}  // namespace bitalloc
