#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace bitalloc {

/// Exponents of 2^x above this raise RateOverflowError.
inline constexpr double kExponentCap = 1024.0;

struct Subchannel {
  int index = 0;             // 1-based
  double inverse_cnr = 0.0;  // G_n = eta_n / |H_n|^2, W/Hz
  double outage_prob = 0.0;  // probability of impulsive noise / interference
};

/// Immutable OFDM channel description.
///
/// Besides the raw subchannels the profile caches, for every subchannel, the
/// delivery weight (1 - p_n) and the activation level G_n ln2 / (1 - p_n) in
/// log2 form. A subchannel with p_n = 1 is never usable; its level is +inf.
class ChannelProfile {
 public:
  ChannelProfile(double spacing_hz, std::vector<Subchannel> subchannels);

  double spacing_hz() const { return spacing_hz_; }
  std::size_t size() const { return subchannels_.size(); }
  const std::vector<Subchannel>& subchannels() const { return subchannels_; }
  const Subchannel& operator[](std::size_t i) const { return subchannels_[i]; }

  /// 1 - p_n.
  double weight(std::size_t i) const { return weight_[i]; }
  /// log2(G_n ln2 / (1 - p_n)); +inf for unusable subchannels.
  double log2_level(std::size_t i) const { return log2_level_[i]; }
  bool usable(std::size_t i) const { return weight_[i] > 0.0; }
  std::size_t usable_count() const { return usable_count_; }

  friend bool operator==(const ChannelProfile& a, const ChannelProfile& b);

 private:
  double spacing_hz_;
  std::vector<Subchannel> subchannels_;
  std::vector<double> weight_;
  std::vector<double> log2_level_;
  std::size_t usable_count_ = 0;
};

bool operator==(const Subchannel& a, const Subchannel& b);

struct DataSetSpec {
  double total_bits = 0.0;  // Q_k, average bits
  double deadline_s = 0.0;  // T_k, cumulative deadline
};

/// Channel plus K >= 1 data sets ordered by nondecreasing deadline.
class ProblemSpec {
 public:
  ProblemSpec(ChannelProfile channel, std::vector<DataSetSpec> sets);

  const ChannelProfile& channel() const { return channel_; }
  const std::vector<DataSetSpec>& sets() const { return sets_; }
  std::size_t num_sets() const { return sets_.size(); }

 private:
  ChannelProfile channel_;
  std::vector<DataSetSpec> sets_;
};

struct SetAllocation {
  double duration_s = 0.0;
  double threshold = 0.0;  // water level; 0 when the set carries no bits
  std::vector<double> bits;
  std::vector<double> energies;
  std::vector<std::size_t> active_set;  // 0-based positions, ascending

  double total_bits() const;
  double total_energy() const;
};

struct SolverDiagnostics {
  std::vector<int> waterfill_iterations;  // per set
  int bisection_iterations = 0;           // summed over all two-set rounds
  double final_residual = 0.0;            // |beta_1| of the last bisection
  bool bisection_exhausted = false;
  std::vector<std::string> warnings;
};

struct Solution {
  std::vector<SetAllocation> allocations;
  double total_energy_j = 0.0;
  /// Delay multipliers, one per set, >= 0 at a KKT point. Empty when the
  /// producer has none (e.g. baselines).
  std::vector<double> betas;
  SolverDiagnostics diagnostics;
};

/// Energy (J) to carry `bits` average bits on one subchannel for `duration_s`.
double energy_for_bits(double bits, double duration_s, double spacing_hz, double inverse_cnr,
                       double outage_prob);

/// Average bits carried by `energy_j` joules; inverse of energy_for_bits.
double bits_for_energy(double energy_j, double duration_s, double spacing_hz, double inverse_cnr,
                       double outage_prob);

/// Builds a SetAllocation for the given per-subchannel bits, filling
/// energies and the active set.
SetAllocation make_allocation(const ChannelProfile& channel, double duration_s, double threshold,
                              std::vector<double> bits);

/// Sums allocation energies into total_energy_j.
void finalize_energy(Solution& solution);

struct FeasibilityTolerance {
  double bits_relative = 1e-6;
  double seconds_absolute = 1e-9;
};

struct Violation {
  enum class Kind { kBits, kDelay, kNegativeDuration };
  Kind kind;
  std::size_t set;   // 1-based k
  double magnitude;  // amount by which the constraint is violated
};

struct FeasibilityReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

FeasibilityReport check_feasibility(const ProblemSpec& problem, const Solution& solution,
                                    FeasibilityTolerance tol = {});

std::string to_string(Violation::Kind kind);

}  // namespace bitalloc
