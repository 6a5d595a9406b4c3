#include "bitalloc/duration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "bitalloc/errors.hpp"

namespace bitalloc {

namespace {

constexpr double kEdgeFraction = 1e-12;

struct Evaluation {
  double t1 = 0.0;
  double t2 = 0.0;
  WaterfillResult wf1;
  WaterfillResult wf2;
  double grad1 = 0.0;  // beta_last form for set 1, i.e. dJ1/dt1
  double grad2 = 0.0;
  double beta1 = 0.0;
  double beta2 = 0.0;
};

enum class Outcome { kOk, kFirstOverflow, kSecondOverflow };

Outcome evaluate(double q1, double q2, double t1, double t_total, const ChannelProfile& channel,
                 Evaluation& out) {
  out.t1 = t1;
  out.t2 = t_total - t1;
  try {
    out.wf1 = solve_threshold(q1, t1, channel);
  } catch (const RateOverflowError&) {
    return Outcome::kFirstOverflow;
  }
  try {
    out.wf2 = solve_threshold(q2, out.t2, channel);
  } catch (const RateOverflowError&) {
    return Outcome::kSecondOverflow;
  }
  out.grad2 = beta_last(out.wf2, q2, out.t2, channel);
  out.grad1 = beta_last(out.wf1, q1, t1, channel);
  out.beta2 = -out.grad2;
  out.beta1 = -beta_earlier(out.wf1, q1, t1, channel, out.grad2);
  return Outcome::kOk;
}

TwoSetSolution from_evaluation(Evaluation&& e) {
  TwoSetSolution s;
  s.t1_s = e.t1;
  s.t2_s = e.t2;
  s.wf1 = std::move(e.wf1);
  s.wf2 = std::move(e.wf2);
  s.beta1 = e.beta1;
  s.beta2 = e.beta2;
  return s;
}

WaterfillResult empty_result(const ChannelProfile& channel) {
  WaterfillResult wf;
  wf.bits.assign(channel.size(), 0.0);
  wf.log2_threshold = -std::numeric_limits<double>::infinity();
  return wf;
}

}  // namespace

double beta_last(const WaterfillResult& wf, double total_bits, double duration_s,
                 const ChannelProfile& channel) {
  if (wf.active_set.empty()) return 0.0;
  double weight_sum = 0.0;
  double g_sum = 0.0;
  for (std::size_t n : wf.active_set) {
    weight_sum += channel.weight(n);
    g_sum += channel[n].inverse_cnr;
  }
  const double b = channel.spacing_hz();
  return wf.threshold * (b / std::numbers::ln2 * weight_sum - total_bits / duration_s) - b * g_sum;
}

double beta_earlier(const WaterfillResult& wf, double total_bits, double duration_s,
                    const ChannelProfile& channel, double later_betas_sum) {
  return beta_last(wf, total_bits, duration_s, channel) - later_betas_sum;
}

double TwoSetSolution::total_energy(const ChannelProfile& channel) const {
  double e = 0.0;
  if (!wf1.active_set.empty()) e += to_allocation(wf1, t1_s, channel).total_energy();
  if (!wf2.active_set.empty()) e += to_allocation(wf2, t2_s, channel).total_energy();
  return e;
}

TwoSetSolution solve_two_sets(double q1, double q2, double t1_max, double t_total,
                              const ChannelProfile& channel, TwoSetOptions options) {
  if (!(q1 >= 0.0) || !(q2 >= 0.0) || !std::isfinite(q1) || !std::isfinite(q2)) {
    throw InvalidInput("bit requirements must be finite and >= 0");
  }
  if (!(q1 + q2 > 0.0)) throw InvalidInput("at least one set must carry bits");
  if (!(t1_max > 0.0) || !std::isfinite(t1_max) || !(t_total >= t1_max) ||
      !std::isfinite(t_total)) {
    throw InvalidInput("deadlines must satisfy 0 < T1 <= T2");
  }
  if (options.delta && !(*options.delta > 0.0)) throw InvalidInput("delta must be > 0");

  const double edge = kEdgeFraction * t1_max;

  if (q2 == 0.0) {
    // Energy falls with duration: give set 1 its whole allowance.
    TwoSetSolution s;
    s.t1_s = t1_max;
    s.t2_s = t_total - t1_max;
    s.wf1 = solve_threshold(q1, t1_max, channel);
    s.wf2 = empty_result(channel);
    s.beta1 = -beta_last(s.wf1, q1, t1_max, channel);
    s.beta2 = 0.0;
    s.boundary = true;
    return s;
  }
  if (q1 == 0.0) {
    TwoSetSolution s;
    s.t1_s = edge;
    s.t2_s = t_total - edge;
    s.wf1 = empty_result(channel);
    s.wf2 = solve_threshold(q2, s.t2_s, channel);
    s.beta2 = -beta_last(s.wf2, q2, s.t2_s, channel);
    s.beta1 = 0.0;
    return s;
  }

  // Without an explicit delta the target is relative to the duration
  // derivatives at the point being tested.
  auto delta_at = [&](const Evaluation& e) {
    if (options.delta) return *options.delta;
    const double scale = std::max(std::abs(e.grad1), std::abs(e.grad2));
    return 1e-9 * (scale > 0.0 ? scale : 1.0);
  };

  // Boundary: first deadline tight. Skipped when it leaves no time for set 2.
  double hi = t1_max;
  if (t_total - t1_max > edge) {
    Evaluation e;
    const Outcome o = evaluate(q1, q2, t1_max, t_total, channel, e);
    if (o == Outcome::kFirstOverflow) {
      std::ostringstream msg;
      msg << "set 1 rate " << q1 / t1_max << " bits/s overflows even at t1 = T1";
      throw RateOverflowError(msg.str());
    }
    if (o == Outcome::kOk) {
      const double d = delta_at(e);
      if (e.beta2 > 0.0 && (e.beta1 > 0.0 || std::abs(e.beta1) < d)) {
        TwoSetSolution s = from_evaluation(std::move(e));
        s.boundary = true;
        s.delta = d;
        return s;
      }
    }
  } else {
    hi = t_total - edge;
  }

  double lo = edge;
  std::optional<Evaluation> best;
  double best_delta = 1.0;
  TwoSetSolution diag;
  int iterations = 0;
  bool converged = false;
  for (; iterations < options.max_bisection_iterations; ++iterations) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;  // interval at machine resolution
    Evaluation e;
    const Outcome o = evaluate(q1, q2, mid, t_total, channel, e);
    if (o == Outcome::kFirstOverflow) {
      lo = mid;
      continue;
    }
    if (o == Outcome::kSecondOverflow) {
      hi = mid;
      continue;
    }
    const double d = delta_at(e);
    if (e.beta2 <= 0.0) {
      ++diag.nonpositive_beta2_iterates;
      std::ostringstream msg;
      msg << "beta_2 = " << e.beta2 << " <= 0 at t1 = " << mid;
      diag.warnings.push_back(msg.str());
    }
    const double b1 = e.beta1;
    if (!best || std::abs(b1) / d < std::abs(best->beta1) / best_delta) {
      best = std::move(e);
      best_delta = d;
    }
    if (std::abs(b1) < d) {
      converged = true;
      ++iterations;
      break;
    }
    if (b1 > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (!best) {
    std::ostringstream msg;
    msg << "no duration split keeps both rates below the exponent cap (Q1 = " << q1
        << ", Q2 = " << q2 << ", T2 = " << t_total << ")";
    throw RateOverflowError(msg.str());
  }

  TwoSetSolution s = from_evaluation(std::move(*best));
  s.delta = best_delta;
  s.bisection_iterations = iterations;
  s.residual = std::abs(s.beta1);
  s.bisection_exhausted = !converged;
  s.nonpositive_beta2_iterates = diag.nonpositive_beta2_iterates;
  s.warnings = std::move(diag.warnings);
  if (!converged) {
    std::ostringstream msg;
    msg << "bisection stopped after " << iterations << " iterations with |beta_1| = "
        << s.residual << " >= delta = " << s.delta;
    s.warnings.push_back(msg.str());
  }
  return s;
}

}  // namespace bitalloc
