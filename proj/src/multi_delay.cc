#include "bitalloc/multi_delay.hpp"

#include <algorithm>
#include <cmath>

#include "bitalloc/errors.hpp"
#include "bitalloc/waterfill.hpp"

namespace bitalloc {

namespace {

// WaterfillResult view of a committed allocation, for the beta formulas.
WaterfillResult as_waterfill(const SetAllocation& a) {
  WaterfillResult wf;
  wf.threshold = a.threshold;
  wf.log2_threshold = a.threshold > 0.0 ? std::log2(a.threshold) : 0.0;
  wf.bits = a.bits;
  wf.active_set = a.active_set;
  return wf;
}

SetAllocation idle_allocation(std::size_t n_sub) {
  SetAllocation a;
  a.bits.assign(n_sub, 0.0);
  a.energies.assign(n_sub, 0.0);
  return a;
}

}  // namespace

std::vector<double> delay_multipliers(const ProblemSpec& problem, const Solution& solution) {
  const auto& sets = problem.sets();
  std::vector<double> betas(sets.size(), 0.0);
  double later = 0.0;  // sum of later dJ/dt values, = -(sum of later multipliers)
  for (std::size_t k = sets.size(); k-- > 0;) {
    const SetAllocation& a = solution.allocations[k];
    if (sets[k].total_bits == 0.0 || a.active_set.empty()) continue;
    const double slope =
        beta_earlier(as_waterfill(a), sets[k].total_bits, a.duration_s, problem.channel(), later);
    betas[k] = -slope;
    later += slope;
  }
  return betas;
}

Solution solve(const ProblemSpec& problem, SolveOptions options) {
  const ChannelProfile& channel = problem.channel();
  const auto& sets = problem.sets();
  const std::size_t n_sub = channel.size();

  std::vector<std::size_t> live;  // sets with bits, deadline order preserved
  for (std::size_t k = 0; k < sets.size(); ++k) {
    if (sets[k].total_bits > 0.0) live.push_back(k);
  }
  if (live.empty()) throw InvalidInput("total bits over all sets must be > 0");

  Solution solution;
  solution.allocations.assign(sets.size(), idle_allocation(n_sub));
  solution.diagnostics.waterfill_iterations.assign(sets.size(), 0);
  solution.betas.assign(sets.size(), 0.0);

  const TwoSetOptions inner{options.delta, options.max_bisection_iterations};

  if (live.size() == 1) {
    const std::size_t k = live.front();
    const double t = sets[k].deadline_s;
    WaterfillResult wf = solve_threshold(sets[k].total_bits, t, channel);
    solution.diagnostics.waterfill_iterations[k] = wf.iterations;
    solution.allocations[k] = to_allocation(wf, t, channel);
    solution.betas[k] = -beta_last(wf, sets[k].total_bits, t, channel);
    finalize_energy(solution);
    return solution;
  }

  // Suffix rounds: the pooled earlier sets must finish by min(T_{j-1}, budget)
  // and the whole remaining group by the budget.
  double budget = sets[live.back()].deadline_s;
  for (std::size_t r = live.size(); r-- > 1;) {
    const std::size_t last = live[r];
    const std::size_t prev = live[r - 1];
    const double q2 = sets[last].total_bits;
    double pooled_bits = 0.0;
    for (std::size_t i = 0; i < r; ++i) pooled_bits += sets[live[i]].total_bits;
    const double t1_max = std::min(sets[prev].deadline_s, budget);
    TwoSetSolution round = solve_two_sets(pooled_bits, q2, t1_max, budget, channel, inner);

    solution.allocations[last] = to_allocation(round.wf2, round.t2_s, channel);
    solution.diagnostics.waterfill_iterations[last] = round.wf2.iterations;
    solution.diagnostics.bisection_iterations += round.bisection_iterations;
    solution.diagnostics.final_residual = round.residual;
    solution.diagnostics.bisection_exhausted |= round.bisection_exhausted;
    for (std::string& w : round.warnings) {
      solution.diagnostics.warnings.push_back("set " + std::to_string(last + 1) + ": " +
                                              std::move(w));
    }
    budget = round.t1_s;
    if (r == 1) {
      // The pooled pseudo-set is now set `prev` alone; its water-filling is final.
      solution.allocations[prev] = to_allocation(round.wf1, round.t1_s, channel);
      solution.diagnostics.waterfill_iterations[prev] = round.wf1.iterations;
      if (live.size() == 2) {
        solution.betas[prev] = round.beta1;
        solution.betas[last] = round.beta2;
      }
    }
  }
  if (live.size() > 2) solution.betas = delay_multipliers(problem, solution);
  finalize_energy(solution);
  return solution;
}

}  // namespace bitalloc
