#include "bitalloc/runner.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>

#include "bitalloc/baselines.hpp"
#include "bitalloc/channel_io.hpp"
#include "bitalloc/errors.hpp"
#include "bitalloc/multi_delay.hpp"
#include "bitalloc/oracle.hpp"
#include "bitalloc/waterfill.hpp"

namespace bitalloc {

namespace {

constexpr int kFormatVersion = 1;

Json number_or_null(std::optional<double> v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

std::string cell(std::optional<double> v) { return v ? format_double(*v) : std::string(); }

double rate_of(const DataSetSpec& set, const SetAllocation& a) {
  return a.duration_s > 0.0 ? set.total_bits / a.duration_s : 0.0;
}

// Active count on the rate -> count curve: water level for the rate over a
// unit duration, counted by the independent root finder.
int curve_active_count(double rate, const ChannelProfile& channel) {
  if (!(rate > 0.0)) return 0;
  const double level = oracle::threshold_by_rootfind(rate, 1.0, channel);
  const std::vector<double> bits = bits_from_threshold(level, 1.0, channel);
  int count = 0;
  for (double b : bits) count += b > 0.0 ? 1 : 0;
  return count;
}

struct Point {
  double sweep_value = 0.0;
  std::vector<DataSetSpec> sets;
  std::optional<ChannelProfile> channel;
};

}  // namespace

int ScenarioResult::exit_code() const {
  if (failed == 0) return 0;
  return failed == points ? 1 : 2;
}

ScenarioResult run_scenario(const Scenario& scenario, RunMode mode, std::uint64_t seed) {
  ScenarioResult result;
  Json& doc = result.document;
  doc["format"] = "bitalloc-result";
  doc["version"] = kFormatVersion;
  doc["scenario"] = scenario.name;
  doc["seed"] = seed;

  CsvSeries energy{"energy_vs_bits",
                   {"point", "sweep_value", "total_bits", "energy_j", "baseline_energy_j"},
                   {}};
  CsvSeries rates{"rate_per_set", {"point", "sweep_value", "set", "rate_bps"}, {}};
  CsvSeries counts{"active_count_vs_rate",
                   {"point", "sweep_value", "set", "rate_bps", "active_count", "curve_active_count"},
                   {}};
  CsvSeries impairment{"energy_impairment",
                       {"point", "sweep_value", "total_bits", "energy_j", "ideal_energy_j"},
                       {}};

  std::optional<ChannelProfile> base_channel;
  std::string channel_error;
  try {
    base_channel = resolve_channel(scenario, seed);
  } catch (const std::exception& e) {
    channel_error = e.what();
  }
  if (base_channel) {
    doc["channel"] = {{"subchannels", base_channel->size()},
                      {"spacing_hz", base_channel->spacing_hz()},
                      {"usable_subchannels", base_channel->usable_count()}};
  } else {
    doc["channel"] = {{"error", channel_error}};
  }

  const bool sweeping = mode == RunMode::kSweep && scenario.sweep.has_value();
  if (sweeping) {
    doc["sweep"] = {{"variable", to_string(scenario.sweep->variable)},
                    {"values", scenario.sweep->values}};
  } else {
    doc["sweep"] = nullptr;
  }
  const std::vector<double> values = sweeping ? scenario.sweep->values : std::vector<double>{1.0};

  Json records = Json::array();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    Json rec;
    rec["index"] = i;
    rec["sweep_value"] = sweeping ? Json(v) : Json(nullptr);
    ++result.points;
    try {
      if (!base_channel) throw InvalidInput("channel: " + channel_error);
      std::vector<DataSetSpec> sets = scenario.sets;
      ChannelProfile channel = *base_channel;
      if (sweeping) {
        switch (scenario.sweep->variable) {
          case SweepVariable::kTotalBitsScale:
            for (DataSetSpec& s : sets) s.total_bits *= v;
            break;
          case SweepVariable::kCnrShiftDb:
            channel = shift_cnr(channel, v);
            break;
          case SweepVariable::kOutageScale:
            channel = scale_outage(channel, v);
            break;
        }
      }
      const ProblemSpec problem(channel, sets);
      const Solution sol = solve(problem, SolveOptions{scenario.solver.delta});
      const FeasibilityReport feas = check_feasibility(problem, sol);

      double total_bits = 0.0;
      for (const DataSetSpec& s : sets) total_bits += s.total_bits;
      const std::string sweep_cell = sweeping ? format_double(v) : std::string();
      const std::string point_cell = std::to_string(i);

      rec["status"] = "ok";
      rec["total_bits"] = total_bits;
      rec["total_energy_j"] = sol.total_energy_j;
      Json set_docs = Json::array();
      Json warnings = Json::array();
      for (std::size_t k = 0; k < sets.size(); ++k) {
        const SetAllocation& a = sol.allocations[k];
        const double rate = rate_of(sets[k], a);
        set_docs.push_back({{"k", k + 1},
                            {"total_bits", sets[k].total_bits},
                            {"deadline_s", sets[k].deadline_s},
                            {"duration_s", a.duration_s},
                            {"rate_bps", rate},
                            {"active_count", a.active_set.size()},
                            {"threshold", a.threshold},
                            {"beta", sol.betas[k]},
                            {"energy_j", a.total_energy()}});
        rates.rows.push_back({point_cell, sweep_cell, std::to_string(k + 1), format_double(rate)});
        counts.rows.push_back({point_cell, sweep_cell, std::to_string(k + 1), format_double(rate),
                               std::to_string(a.active_set.size()),
                               std::to_string(curve_active_count(rate, channel))});
        if (scenario.max_rate_bps && rate > *scenario.max_rate_bps) {
          warnings.push_back("set " + std::to_string(k + 1) + " rate " + format_double(rate) +
                             " bps exceeds max_rate (not enforced)");
        }
      }
      rec["sets"] = std::move(set_docs);

      std::optional<double> baseline;
      if (scenario.solver.baseline) {
        std::vector<double> durations;
        for (const SetAllocation& a : sol.allocations) durations.push_back(a.duration_s);
        try {
          baseline = equal_bit_allocation(problem, durations).total_energy_j;
        } catch (const RateOverflowError& e) {
          warnings.push_back(std::string("baseline: ") + e.what());
        }
        rec["baseline_energy_j"] = number_or_null(baseline);
      }
      energy.rows.push_back({point_cell, sweep_cell, format_double(total_bits),
                             format_double(sol.total_energy_j), cell(baseline)});

      if (scenario.solver.ideal_variant) {
        std::optional<double> ideal;
        try {
          ideal = solve(ProblemSpec(strip_impairments(channel), sets),
                        SolveOptions{scenario.solver.delta})
                      .total_energy_j;
        } catch (const std::exception& e) {
          warnings.push_back(std::string("ideal variant: ") + e.what());
        }
        rec["ideal_energy_j"] = number_or_null(ideal);
        impairment.rows.push_back({point_cell, sweep_cell, format_double(total_bits),
                                   format_double(sol.total_energy_j), cell(ideal)});
      }

      if (scenario.solver.oracle) {
        Json o;
        const oracle::KktReport kkt = oracle::kkt_residuals(problem, sol);
        o["kkt_max_residual"] = kkt.max_abs_residual;
        if (sets.size() <= 4) {
          const Solution ref = oracle::brute_force_durations(
              problem, oracle::BruteForceOptions{scenario.solver.grid_points});
          o["energy_j"] = ref.total_energy_j;
          o["relative_gap"] = (sol.total_energy_j - ref.total_energy_j) / ref.total_energy_j;
          o["oracle_kkt_max_residual"] = oracle::kkt_residuals(problem, ref).max_abs_residual;
        } else {
          o["skipped"] = "brute-force search needs K <= 4";
        }
        rec["oracle"] = std::move(o);
      }

      Json viol = Json::array();
      for (const Violation& x : feas.violations) {
        viol.push_back({{"kind", to_string(x.kind)}, {"set", x.set}, {"magnitude", x.magnitude}});
      }
      rec["violations"] = std::move(viol);
      rec["diagnostics"] = {{"bisection_iterations", sol.diagnostics.bisection_iterations},
                            {"final_residual", sol.diagnostics.final_residual},
                            {"bisection_exhausted", sol.diagnostics.bisection_exhausted},
                            {"waterfill_iterations", sol.diagnostics.waterfill_iterations}};
      for (const std::string& w : sol.diagnostics.warnings) warnings.push_back(w);
      rec["warnings"] = std::move(warnings);
    } catch (const std::exception& e) {
      ++result.failed;
      rec["status"] = "error";
      rec["error"] = e.what();
    }
    records.push_back(std::move(rec));
  }
  doc["records"] = std::move(records);
  doc["summary"] = {{"points", result.points}, {"failed", result.failed}};

  result.series.push_back(std::move(energy));
  result.series.push_back(std::move(rates));
  result.series.push_back(std::move(counts));
  if (scenario.solver.ideal_variant) result.series.push_back(std::move(impairment));
  return result;
}

std::string render_document(const Json& document) { return document.dump(2) + "\n"; }

void write_series(const CsvSeries& series, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path path = std::filesystem::path(dir) / (series.name + ".csv");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path.string());
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  line(series.header);
  for (const auto& row : series.rows) line(row);
}

}  // namespace bitalloc
