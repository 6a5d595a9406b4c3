#pragma once

#include <vector>

#include "bitalloc/model.hpp"

namespace bitalloc::oracle {

/// Water level by bisection on the monotone rate map, independent of the
/// active-set iteration.
double threshold_by_rootfind(double total_bits, double duration_s, const ChannelProfile& channel);

struct BruteForceOptions {
  int grid_points_per_axis = 200;
  int max_refinement_sweeps = 500;
};

/// Exhaustive grid over cumulative durations s_1 < ... < s_{K-1} < s_K = T_K
/// (s_k <= T_k), followed by coordinate-wise golden-section refinement. Each
/// coordinate move trades time between two adjacent sets. K <= 4.
Solution brute_force_durations(const ProblemSpec& problem, BruteForceOptions options = {});

struct KktReport {
  /// [set][subchannel], normalized by lambda_k. Zero where not applicable.
  std::vector<std::vector<double>> stationarity_residuals;
  /// dL/dt_k normalized by lambda_k Q_k / t_k; empty when multipliers are
  /// missing.
  std::vector<double> duration_stationarity_residuals;
  /// [bits_1..bits_K, delay_1..delay_K]; delay entries only when
  /// multipliers are present.
  std::vector<double> complementary_slackness_residuals;
  /// [shortfall_1..shortfall_K, overrun_1..overrun_K], normalized by Q_k and
  /// T_k, then -beta_k (clamped at 0, normalized) when multipliers are present.
  std::vector<double> primal_residuals;
  /// [lambda_1 >= 0 .. lambda_K >= 0, beta_1 >= 0 .. beta_K >= 0]
  std::vector<bool> dual_feasibility_flags;
  bool multipliers_checked = false;
  double max_abs_residual = 0.0;
};

KktReport kkt_residuals(const ProblemSpec& problem, const Solution& solution);

}  // namespace bitalloc::oracle
