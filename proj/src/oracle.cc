#include "bitalloc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include "bitalloc/errors.hpp"
#include "bitalloc/multi_delay.hpp"
#include "bitalloc/waterfill.hpp"

namespace bitalloc::oracle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double set_energy(const DataSetSpec& set, double t, const ChannelProfile& channel) {
  if (set.total_bits == 0.0) return 0.0;
  if (!(t > 0.0)) return kInf;
  try {
    const WaterfillResult wf = solve_threshold(set.total_bits, t, channel);
    return to_allocation(wf, t, channel).total_energy();
  } catch (const RateOverflowError&) {
    return kInf;
  }
}

// Golden-section search on [a, b] for a unimodal f. `hint` breaks ties when
// both probes are infinite.
double golden(const std::function<double(double)>& f, double a, double b, double hint,
              double tol) {
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - ratio * (b - a);
  double d = a + ratio * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    bool go_left;
    if (std::isinf(fc) && std::isinf(fd)) {
      go_left = hint < d;
    } else {
      go_left = fc < fd;
    }
    if (go_left) {
      b = d;
      d = c;
      fd = fc;
      c = b - ratio * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + ratio * (b - a);
      fd = f(d);
    }
    if (!(c < d)) break;
  }
  return fc < fd ? c : d;
}

// Bracketed 1-D minimization of a convex f on [lo, hi] starting near x0.
// The bracket grows while the minimizer sits on an interior bracket edge.
double minimize_1d(const std::function<double(double)>& f, double lo, double hi, double x0,
                   double width, double tol) {
  double best_x = x0;
  double best_f = f(x0);
  for (int grow = 0; grow < 64; ++grow) {
    const double a = std::max(lo, best_x - width);
    const double b = std::min(hi, best_x + width);
    if (!(b - a > tol)) break;
    const double x = golden(f, a, b, best_x, tol);
    const double fx = f(x);
    if (fx < best_f) {
      best_f = fx;
      best_x = x;
    }
    const bool at_left = best_x - a < 2.0 * tol && a > lo;
    const bool at_right = b - best_x < 2.0 * tol && b < hi;
    if (!at_left && !at_right) break;
    width *= 4.0;
  }
  // Feasible-range edges are candidates too (deadline-tight optimum).
  for (double edge : {lo, hi}) {
    const double fe = f(edge);
    if (fe < best_f) {
      best_f = fe;
      best_x = edge;
    }
  }
  return best_x;
}

}  // namespace

double threshold_by_rootfind(double total_bits, double duration_s, const ChannelProfile& channel) {
  if (!(total_bits > 0.0) || !std::isfinite(total_bits)) {
    throw InvalidInput("total_bits must be finite and > 0");
  }
  if (!(duration_s > 0.0) || !std::isfinite(duration_s)) {
    throw InvalidInput("duration_s must be finite and > 0");
  }
  double floor_level = kInf;
  for (std::size_t n = 0; n < channel.size(); ++n) {
    floor_level = std::min(floor_level, channel.log2_level(n));
  }
  if (std::isinf(floor_level)) throw InfeasibleError("no subchannel with outage_prob < 1");

  const double target = total_bits / duration_s;
  auto rate_at = [&](double log2_threshold) {
    return rate_from_threshold(std::exp2(log2_threshold), channel);
  };

  // Work in log2(lambda); the rate is zero at the best subchannel's level.
  // Beyond floor + cap the best subchannel alone would exceed the exponent cap.
  double lo = floor_level;
  double span = 1.0;
  auto unreachable = [&] {
    std::ostringstream msg;
    msg << "rate " << target << " bits/s unreachable below the exponent cap";
    return RateOverflowError(msg.str());
  };
  while (true) {
    span = std::min(span, static_cast<double>(kExponentCap));
    const double top = lo + span;
    if (std::isinf(std::exp2(top))) throw unreachable();
    if (rate_at(top) >= target) break;
    if (span == kExponentCap) throw unreachable();
    span *= 2.0;
  }
  double hi = lo + span;
  for (int i = 0; i < 400; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    if (rate_at(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double log2_threshold =
      std::abs(rate_at(lo) - target) <= std::abs(rate_at(hi) - target) ? lo : hi;
  if (log2_threshold - floor_level > kExponentCap) {
    throw RateOverflowError("threshold exponent exceeds the cap");
  }
  const double residual = std::abs(rate_at(log2_threshold) - target);
  if (residual >= 1e-10 * target) {
    std::ostringstream msg;
    msg << "threshold bisection stalled with relative residual " << residual / target;
    throw InternalError(msg.str());
  }
  return std::exp2(log2_threshold);
}

Solution brute_force_durations(const ProblemSpec& problem, BruteForceOptions options) {
  const std::size_t k_sets = problem.num_sets();
  if (k_sets > 4) throw InvalidInput("brute-force duration search supports K <= 4");
  if (options.grid_points_per_axis < 100) throw InvalidInput("grid_points_per_axis must be >= 100");
  const ChannelProfile& channel = problem.channel();
  const auto& sets = problem.sets();
  const double t_end = sets.back().deadline_s;
  const double eps = 1e-9 * t_end;
  const int m = options.grid_points_per_axis;

  auto energy = [&](std::size_t k, double t) { return set_energy(sets[k], t, channel); };

  // s[0] = 0, s[k] = cumulative end of set k, s[K] = T_K.
  std::vector<double> s(k_sets + 1, 0.0);
  s[k_sets] = t_end;
  std::vector<double> best_s = s;
  double best_energy = kInf;

  auto upper_edge = [&](std::size_t k) {
    return std::min(sets[k - 1].deadline_s, t_end - static_cast<double>(k_sets - k) * eps);
  };

  // Depth-first over the grid; `partial` holds the energy of sets before `axis`.
  std::function<void(std::size_t, double)> descend = [&](std::size_t axis, double partial) {
    if (axis == k_sets) {
      const double total = partial + energy(k_sets - 1, t_end - s[k_sets - 1]);
      if (total < best_energy) {
        best_energy = total;
        best_s = s;
      }
      return;
    }
    const double lo = s[axis - 1] + eps;
    const double hi = upper_edge(axis);
    if (hi < lo) return;
    for (int i = 0; i < m; ++i) {
      s[axis] = m == 1 ? hi : lo + (hi - lo) * static_cast<double>(i) / (m - 1);
      const double e = energy(axis - 1, s[axis] - s[axis - 1]);
      if (std::isinf(e)) continue;
      descend(axis + 1, partial + e);
    }
  };
  if (k_sets > 1) {
    descend(1, 0.0);
  } else {
    best_energy = energy(0, t_end);
  }
  if (std::isinf(best_energy)) {
    throw RateOverflowError("no grid cell keeps every rate below the exponent cap");
  }

  s = best_s;
  int sweeps = 0;
  if (k_sets > 1) {
    const double tol = 1e-10 * t_end;
    std::vector<double> width(k_sets, 0.0);
    for (std::size_t k = 1; k < k_sets; ++k) {
      width[k] = std::max((upper_edge(k) - eps) / (m - 1), 10.0 * tol);
    }
    for (; sweeps < options.max_refinement_sweeps; ++sweeps) {
      double max_move = 0.0;
      for (std::size_t k = 1; k < k_sets; ++k) {
        const double lo = s[k - 1] + eps;
        const double hi = std::min(sets[k - 1].deadline_s, s[k + 1] - eps);
        if (!(hi > lo)) continue;
        auto slice = [&](double x) {
          return energy(k - 1, x - s[k - 1]) + energy(k, s[k + 1] - x);
        };
        const double x0 = std::clamp(s[k], lo, hi);
        const double x = minimize_1d(slice, lo, hi, x0, width[k], tol);
        const double move = std::abs(x - s[k]);
        max_move = std::max(max_move, move);
        width[k] = std::max(4.0 * move, 10.0 * tol);
        s[k] = x;
      }
      if (max_move < tol) break;
    }
  }

  Solution solution;
  solution.allocations.reserve(k_sets);
  solution.diagnostics.waterfill_iterations.assign(k_sets, 0);
  for (std::size_t k = 0; k < k_sets; ++k) {
    const double t = s[k + 1] - s[k];
    if (sets[k].total_bits == 0.0) {
      SetAllocation idle;
      idle.duration_s = t;
      idle.bits.assign(channel.size(), 0.0);
      idle.energies.assign(channel.size(), 0.0);
      solution.allocations.push_back(std::move(idle));
      continue;
    }
    const WaterfillResult wf = solve_threshold(sets[k].total_bits, t, channel);
    solution.diagnostics.waterfill_iterations[k] = wf.iterations;
    solution.allocations.push_back(to_allocation(wf, t, channel));
  }
  solution.diagnostics.bisection_iterations = sweeps;
  finalize_energy(solution);
  solution.betas = delay_multipliers(problem, solution);
  return solution;
}

KktReport kkt_residuals(const ProblemSpec& problem, const Solution& solution) {
  const ChannelProfile& channel = problem.channel();
  const auto& sets = problem.sets();
  const std::size_t k_sets = sets.size();
  if (solution.allocations.size() != k_sets) {
    throw InvalidInput("solution and problem disagree on the number of sets");
  }
  const double b = channel.spacing_hz();
  KktReport report;
  report.multipliers_checked = solution.betas.size() == k_sets;
  report.stationarity_residuals.assign(k_sets, std::vector<double>(channel.size(), 0.0));
  report.complementary_slackness_residuals.assign(k_sets, 0.0);
  report.primal_residuals.assign(2 * k_sets, 0.0);
  report.dual_feasibility_flags.assign(report.multipliers_checked ? 2 * k_sets : k_sets, true);

  std::vector<double> scale(k_sets, 0.0);
  std::vector<double> dj_dt(k_sets, 0.0);
  double scale_max = 0.0;

  for (std::size_t k = 0; k < k_sets; ++k) {
    const SetAllocation& a = solution.allocations[k];
    const double q = sets[k].total_bits;
    if (q == 0.0) continue;
    const double lambda = a.threshold;
    const double t = a.duration_s;
    if (!(lambda > 0.0) || !(t > 0.0)) {
      report.dual_feasibility_flags[k] = lambda >= 0.0;
      std::fill(report.stationarity_residuals[k].begin(), report.stationarity_residuals[k].end(),
                1.0);
      continue;
    }
    const double log2_lambda = std::log2(lambda);
    for (std::size_t n = 0; n < channel.size(); ++n) {
      if (!channel.usable(n)) continue;
      const double bits = a.bits[n];
      const double w = channel.weight(n);
      const double g = channel[n].inverse_cnr;
      if (bits > 0.0) {
        const double x = bits / (w * t * b);
        // dL/dQbar = 2^x ln2 G/(1-p) - lambda = 0 on active subchannels.
        report.stationarity_residuals[k][n] =
            std::exp2(channel.log2_level(n) + x - log2_lambda) - 1.0;
        const double two_x = std::exp2(x);
        dj_dt[k] += std::expm1(x * std::numbers::ln2) * b * g -
                    two_x * bits * g * std::numbers::ln2 / (w * t);
      } else {
        // dL/dQbar >= 0 at Qbar = 0: lambda may not exceed the level.
        report.stationarity_residuals[k][n] =
            std::max(0.0, 1.0 - std::exp2(channel.log2_level(n) - log2_lambda));
      }
    }
    const double delivered = a.total_bits();
    report.complementary_slackness_residuals[k] = std::abs(delivered - q) / q;
    report.primal_residuals[k] = std::max(0.0, q - delivered) / q;
    scale[k] = lambda * q / t;
    scale_max = std::max(scale_max, scale[k]);
  }

  double cumulative = 0.0;
  for (std::size_t k = 0; k < k_sets; ++k) {
    cumulative += solution.allocations[k].duration_s;
    report.primal_residuals[k_sets + k] =
        std::max(0.0, cumulative - sets[k].deadline_s) / sets[k].deadline_s;
  }

  if (report.multipliers_checked) {
    report.duration_stationarity_residuals.assign(k_sets, 0.0);
    report.complementary_slackness_residuals.resize(2 * k_sets, 0.0);
    double later = 0.0;
    for (std::size_t k = k_sets; k-- > 0;) {
      later += solution.betas[k];
      const double norm = scale[k] > 0.0 ? scale[k] : (scale_max > 0.0 ? scale_max : 1.0);
      if (sets[k].total_bits > 0.0) {
        report.duration_stationarity_residuals[k] = (dj_dt[k] + later) / norm;
      }
      report.dual_feasibility_flags[k_sets + k] = solution.betas[k] >= -1e-9 * norm;
      report.complementary_slackness_residuals[k_sets + k] = 0.0;
    }
    cumulative = 0.0;
    for (std::size_t k = 0; k < k_sets; ++k) {
      cumulative += solution.allocations[k].duration_s;
      const double norm = scale[k] > 0.0 ? scale[k] : (scale_max > 0.0 ? scale_max : 1.0);
      const double slack = std::max(0.0, sets[k].deadline_s - cumulative) / sets[k].deadline_s;
      report.complementary_slackness_residuals[k_sets + k] =
          std::abs(solution.betas[k]) / norm * slack;
      // Negative multipliers count as residual, not just as a flag.
      report.primal_residuals.push_back(std::max(0.0, -solution.betas[k]) / norm);
    }
  }

  double m = 0.0;
  for (const auto& row : report.stationarity_residuals) {
    for (double r : row) m = std::max(m, std::abs(r));
  }
  for (double r : report.duration_stationarity_residuals) m = std::max(m, std::abs(r));
  for (double r : report.complementary_slackness_residuals) m = std::max(m, std::abs(r));
  for (double r : report.primal_residuals) m = std::max(m, std::abs(r));
  report.max_abs_residual = m;
  return report;
}

}  // namespace bitalloc::oracle
