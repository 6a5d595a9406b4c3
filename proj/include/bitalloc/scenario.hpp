#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bitalloc/channel_synth.hpp"
#include "bitalloc/model.hpp"
#include "json.hpp"

namespace bitalloc {

using Json = nlohmann::ordered_json;

struct ChannelSource {
  enum class Kind { kInline, kCsv, kSynth };
  Kind kind = Kind::kSynth;
  std::optional<ChannelProfile> inline_profile;
  std::string csv_path;  // resolved against the scenario file's directory
  std::optional<double> spacing_hz;
  SynthParams synth;
  bool synth_has_seed = false;  // seed given inside the synth block
};

enum class SweepVariable { kTotalBitsScale, kCnrShiftDb, kOutageScale };

struct Sweep {
  SweepVariable variable = SweepVariable::kTotalBitsScale;
  std::vector<double> values;
};

struct SolverSettings {
  std::optional<double> delta;
  bool oracle = false;
  int grid_points = 200;
  bool baseline = true;
  bool ideal_variant = false;  // also solve with every p_n = 0
};

/// In-memory form of a scenario file. See docs/scenario-format.md.
struct Scenario {
  std::string name;
  ChannelSource channel;
  std::vector<DataSetSpec> sets;
  std::optional<double> slot_ms;
  std::optional<double> max_rate_bps;
  std::optional<Sweep> sweep;
  SolverSettings solver;
  std::optional<std::uint64_t> seed;
};

/// Number, or string with an optional unit suffix. Accepted suffixes depend
/// on `unit`: "bits" takes b/kb/Mb/Gb, "bps" takes bps/kbps/Mbps/Gbps.
double parse_quantity(const Json& value, const std::string& unit, const std::string& field);

Scenario parse_scenario(const Json& doc, const std::string& base_dir = ".");
Scenario load_scenario(const std::string& path);

/// Seed from BITALLOC_SEED, else 0.
std::uint64_t default_seed();

/// Channel for the scenario; synth channels without their own seed use `seed`.
ChannelProfile resolve_channel(const Scenario& scenario, std::uint64_t seed);

std::string to_string(SweepVariable v);

}  // namespace bitalloc
