#pragma once

#include <optional>
#include <vector>

#include "bitalloc/duration.hpp"
#include "bitalloc/model.hpp"

namespace bitalloc {

struct SolveOptions {
  std::optional<double> delta;  // forwarded to every two-set round
  int max_bisection_iterations = 200;
};

/// Durations and bit loading for K >= 1 sets.
///
/// K = 1 water-fills over the whole deadline; K = 2 is the two-set optimum.
/// For K > 2 the last set is split off against the pooled earlier sets, its
/// duration and bits are committed, and the remaining sets recurse within the
/// time the pooled set was given. Sets with no bits get zero duration and
/// take no part in the rounds.
Solution solve(const ProblemSpec& problem, SolveOptions options = {});

/// Delay multipliers implied by an allocation: beta_K = -dJ_K/dt_K and
/// beta_k = -dJ_k/dt_k - sum_{i>k} beta_i, using the water-filling closed
/// form at each set's recorded threshold. Sets with no bits get 0.
std::vector<double> delay_multipliers(const ProblemSpec& problem, const Solution& solution);

}  // namespace bitalloc
