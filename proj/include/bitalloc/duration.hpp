#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bitalloc/model.hpp"
#include "bitalloc/waterfill.hpp"

namespace bitalloc {

/// lambda (B/ln2 sum_{active}(1-p) - Q/t) - B sum_{active} G.
///
/// This is the closed form of dJ_k/dt_k at a water-filled allocation, so it
/// is <= 0 whenever the set carries bits. The delay multiplier of the last
/// constraint is its negation; see delay_multipliers().
double beta_last(const WaterfillResult& wf, double total_bits, double duration_s,
                 const ChannelProfile& channel);

/// beta_last(...) - later_betas_sum.
double beta_earlier(const WaterfillResult& wf, double total_bits, double duration_s,
                    const ChannelProfile& channel, double later_betas_sum);

struct TwoSetSolution {
  double t1_s = 0.0;
  double t2_s = 0.0;
  WaterfillResult wf1;
  WaterfillResult wf2;
  // Delay multipliers (>= 0 at the optimum).
  double beta1 = 0.0;
  double beta2 = 0.0;
  double delta = 0.0;  // accuracy target that applied at the returned point
  int bisection_iterations = 0;
  double residual = 0.0;  // final |beta1| when bisection ran, else 0
  bool boundary = false;  // first deadline tight
  bool bisection_exhausted = false;
  int nonpositive_beta2_iterates = 0;
  std::vector<std::string> warnings;

  double total_energy(const ChannelProfile& channel) const;
};

struct TwoSetOptions {
  // Target for |beta_1|. Default: 1e-9 * max(|dJ1/dt1|, |dJ2/dt2|) at the
  // point being tested.
  std::optional<double> delta;
  int max_bisection_iterations = 200;
};

/// Optimal durations and bit loading for two sets sharing t1 + t2 = T2 with
/// t1 <= T1. Checks the boundary t1 = T1 first, otherwise bisects t1 on the
/// sign of beta_1.
TwoSetSolution solve_two_sets(double q1, double q2, double t1_max, double t_total,
                              const ChannelProfile& channel, TwoSetOptions options = {});

}  // namespace bitalloc
