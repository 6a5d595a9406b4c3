// Command-line front end: solve / audit / sweep scenarios, synthesize and
// export channel profiles.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "bitalloc/channel_io.hpp"
#include "bitalloc/channel_synth.hpp"
#include "bitalloc/errors.hpp"
#include "bitalloc/runner.hpp"
#include "bitalloc/scenario.hpp"

namespace {

using namespace bitalloc;

struct ScenarioFlags {
  std::string path;
  std::string out;
  std::string csv_dir;
  std::optional<std::uint64_t> seed;
  std::optional<double> delta;
  std::optional<double> scale;
  std::optional<int> grid_points;
  bool audit = false;
};

void add_scenario_flags(CLI::App* cmd, ScenarioFlags& f) {
  cmd->add_option("scenario", f.path, "Scenario file (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out,-o", f.out, "Write the result document here instead of stdout");
  cmd->add_option("--csv-dir", f.csv_dir, "Also write per-figure CSV series into this directory");
  cmd->add_option("--seed", f.seed, "Seed for synthetic channels (overrides file and BITALLOC_SEED)");
  cmd->add_option("--delta", f.delta, "Bisection accuracy on |beta_1| (overrides solver.delta)");
  cmd->add_option("--scale", f.scale, "Multiply every set's total_bits by this factor");
  cmd->add_option("--grid-points", f.grid_points, "Oracle grid points per axis (>= 100)");
}

int run(const ScenarioFlags& f, RunMode mode, bool force_oracle) {
  Scenario sc = load_scenario(f.path);
  if (f.seed) {
    sc.seed = *f.seed;
    sc.channel.synth_has_seed = false;
  }
  if (f.delta) sc.solver.delta = *f.delta;
  if (f.scale) {
    for (DataSetSpec& s : sc.sets) s.total_bits *= *f.scale;
  }
  if (f.grid_points) sc.solver.grid_points = *f.grid_points;
  if (force_oracle || f.audit) sc.solver.oracle = true;
  if (mode == RunMode::kSweep && !sc.sweep) {
    std::cerr << "error: scenario has no sweep block\n";
    return 1;
  }
  const std::uint64_t seed = sc.seed ? *sc.seed : default_seed();
  const ScenarioResult result = run_scenario(sc, mode, seed);
  const std::string text = render_document(result.document);
  if (f.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(f.out, std::ios::binary);
    if (!out) throw InvalidInput("cannot write " + f.out);
    out << text;
  }
  if (!f.csv_dir.empty()) {
    for (const CsvSeries& s : result.series) write_series(s, f.csv_dir);
  }
  return result.exit_code();
}

std::vector<OutageRange> parse_outage_flag(const std::string& text) {
  // "1-39:0.06,40-735:0.05"
  std::vector<OutageRange> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    const auto dash = item.find('-');
    if (colon == std::string::npos || dash == std::string::npos || dash > colon) {
      throw InvalidInput("--outage: expected FIRST-LAST:P, got '" + item + "'");
    }
    out.push_back({std::stoi(item.substr(0, dash)),
                   std::stoi(item.substr(dash + 1, colon - dash - 1)),
                   std::stod(item.substr(colon + 1))});
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum-energy OFDM bit allocation under multiple delay constraints"};
  app.require_subcommand(1);

  ScenarioFlags solve_flags, audit_flags, sweep_flags, export_flags;
  CLI::App* solve_cmd = app.add_subcommand("solve", "Solve the scenario's base point");
  add_scenario_flags(solve_cmd, solve_flags);
  CLI::App* audit_cmd =
      app.add_subcommand("audit", "Solve the base point and check it against the oracle");
  add_scenario_flags(audit_cmd, audit_flags);
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Solve every point of the scenario's sweep");
  add_scenario_flags(sweep_cmd, sweep_flags);
  sweep_cmd->add_flag("--audit", sweep_flags.audit, "Run the oracle at every sweep point");

  CLI::App* export_cmd =
      app.add_subcommand("export-channel", "Write the scenario's resolved channel as CSV");
  export_cmd->add_option("scenario", export_flags.path, "Scenario file")->required()->check(
      CLI::ExistingFile);
  export_cmd->add_option("--out,-o", export_flags.out, "Output CSV (default stdout)");
  export_cmd->add_option("--seed", export_flags.seed, "Seed for synthetic channels");

  SynthParams synth;
  std::string preset, outage, synth_out;
  std::optional<std::uint64_t> synth_seed;
  CLI::App* synth_cmd = app.add_subcommand("synth-channel", "Generate a synthetic channel CSV");
  synth_cmd->add_option("--preset", preset, "Parameter preset")->check(CLI::IsMember({"ofdm735"}));
  synth_cmd->add_option("--n", synth.n_subchannels, "Number of subchannels");
  synth_cmd->add_option("--spacing", synth.spacing_hz, "Subchannel spacing in Hz");
  synth_cmd->add_option("--cnr-db-min", synth.cnr_db_min, "Lowest CNR in dB");
  synth_cmd->add_option("--cnr-db-max", synth.cnr_db_max, "Highest CNR in dB");
  synth_cmd->add_option("--decay-db", synth.decay_db_per_subchannel, "CNR roll-off per subchannel");
  synth_cmd->add_option("--outage", outage, "Outage ranges, e.g. 1-39:0.06,40-735:0.05");
  synth_cmd->add_option("--seed", synth_seed, "Generator seed (default BITALLOC_SEED or 0)");
  synth_cmd->add_option("--out,-o", synth_out, "Output CSV (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve_cmd) return run(solve_flags, RunMode::kBasePoint, false);
    if (*audit_cmd) return run(audit_flags, RunMode::kBasePoint, true);
    if (*sweep_cmd) return run(sweep_flags, RunMode::kSweep, false);

    ChannelProfile channel = [&] {
      if (*export_cmd) {
        Scenario sc = load_scenario(export_flags.path);
        if (export_flags.seed) {
          sc.seed = *export_flags.seed;
          sc.channel.synth_has_seed = false;
        }
        return resolve_channel(sc, sc.seed ? *sc.seed : default_seed());
      }
      SynthParams p = synth;
      if (!preset.empty()) {
        p = ofdm735_params(0);
        for (const CLI::Option* opt : synth_cmd->get_options()) {
          if (opt->count() == 0) continue;
          const std::string name = opt->get_name();
          if (name == "--n") p.n_subchannels = synth.n_subchannels;
          if (name == "--spacing") p.spacing_hz = synth.spacing_hz;
          if (name == "--cnr-db-min") p.cnr_db_min = synth.cnr_db_min;
          if (name == "--cnr-db-max") p.cnr_db_max = synth.cnr_db_max;
          if (name == "--decay-db") p.decay_db_per_subchannel = synth.decay_db_per_subchannel;
        }
      }
      if (!outage.empty()) {
        p.outage_pattern = parse_outage_flag(outage);
      } else if (preset.empty()) {
        p.outage_pattern = {{1, p.n_subchannels, 0.0}};
      }
      p.seed = synth_seed ? *synth_seed : default_seed();
      return synth_channel(p);
    }();
    const std::string& out_path = *export_cmd ? export_flags.out : synth_out;
    if (out_path.empty()) {
      write_channel_csv(std::cout, channel);
    } else {
      save_channel_csv(out_path, channel);
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
