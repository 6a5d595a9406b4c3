#include "bitalloc/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "bitalloc/channel_io.hpp"
#include "bitalloc/errors.hpp"

namespace bitalloc {

namespace {

const Json& require(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw InvalidInput(where + ": missing field '" + key + "'");
  }
  return obj.at(key);
}

double require_number(const Json& v, const std::string& field) {
  if (!v.is_number()) throw InvalidInput(field + ": expected a number");
  return v.get<double>();
}

void reject_unknown(const Json& obj, std::initializer_list<const char*> known,
                    const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (std::find_if(known.begin(), known.end(), [&](const char* k) { return key == k; }) ==
        known.end()) {
      throw InvalidInput(where + ": unknown field '" + key + "'");
    }
  }
}

std::vector<OutageRange> parse_outage(const Json& v) {
  if (!v.is_array()) throw InvalidInput("synth.outage: expected an array");
  std::vector<OutageRange> out;
  for (const Json& r : v) {
    reject_unknown(r, {"first", "last", "p"}, "synth.outage");
    out.push_back({require(r, "first", "synth.outage").get<int>(),
                   require(r, "last", "synth.outage").get<int>(),
                   require_number(require(r, "p", "synth.outage"), "synth.outage.p")});
  }
  return out;
}

ChannelSource parse_channel(const Json& v, const std::string& base_dir) {
  if (!v.is_object()) throw InvalidInput("channel: expected an object");
  const int sources = static_cast<int>(v.contains("inline")) + static_cast<int>(v.contains("csv")) +
                      static_cast<int>(v.contains("synth"));
  if (sources != 1) {
    throw InvalidInput("channel: exactly one of 'inline', 'csv', 'synth' is required");
  }
  reject_unknown(v, {"inline", "csv", "synth", "spacing_hz"}, "channel");
  ChannelSource src;
  if (v.contains("spacing_hz")) src.spacing_hz = require_number(v["spacing_hz"], "channel.spacing_hz");
  if (v.contains("inline")) {
    const Json& in = v["inline"];
    reject_unknown(in, {"spacing_hz", "subchannels"}, "channel.inline");
    const double spacing = src.spacing_hz
                               ? *src.spacing_hz
                               : require_number(require(in, "spacing_hz", "channel.inline"),
                                                "channel.inline.spacing_hz");
    std::vector<Subchannel> subs;
    int index = 0;
    for (const Json& s : require(in, "subchannels", "channel.inline")) {
      reject_unknown(s, {"G_WHz", "p"}, "channel.inline.subchannels");
      ++index;
      subs.push_back({index, require_number(require(s, "G_WHz", "subchannel"), "G_WHz"),
                      s.contains("p") ? require_number(s["p"], "p") : 0.0});
    }
    src.kind = ChannelSource::Kind::kInline;
    src.inline_profile.emplace(spacing, std::move(subs));
  } else if (v.contains("csv")) {
    src.kind = ChannelSource::Kind::kCsv;
    std::filesystem::path p = v["csv"].get<std::string>();
    if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
    src.csv_path = p.lexically_normal().string();
  } else {
    const Json& s = v["synth"];
    src.kind = ChannelSource::Kind::kSynth;
    reject_unknown(s,
                   {"preset", "n_subchannels", "spacing_hz", "cnr_db_min", "cnr_db_max",
                    "decay_db_per_subchannel", "outage", "seed"},
                   "channel.synth");
    if (s.contains("preset")) {
      if (s["preset"] != "ofdm735") throw InvalidInput("channel.synth.preset: unknown preset");
      src.synth = ofdm735_params(0);
    }
    auto num = [&](const char* key, double& dst) {
      if (s.contains(key)) dst = require_number(s[key], std::string("channel.synth.") + key);
    };
    if (s.contains("n_subchannels")) src.synth.n_subchannels = s["n_subchannels"].get<int>();
    num("spacing_hz", src.synth.spacing_hz);
    num("cnr_db_min", src.synth.cnr_db_min);
    num("cnr_db_max", src.synth.cnr_db_max);
    num("decay_db_per_subchannel", src.synth.decay_db_per_subchannel);
    if (s.contains("outage")) src.synth.outage_pattern = parse_outage(s["outage"]);
    if (src.spacing_hz) src.synth.spacing_hz = *src.spacing_hz;
    if (s.contains("seed")) {
      src.synth.seed = s["seed"].get<std::uint64_t>();
      src.synth_has_seed = true;
    }
    if (!s.contains("preset")) {
      for (const char* key : {"n_subchannels", "spacing_hz", "cnr_db_min", "cnr_db_max"}) {
        if (!s.contains(key) && !(std::string(key) == "spacing_hz" && src.spacing_hz)) {
          throw InvalidInput(std::string("channel.synth: missing field '") + key + "'");
        }
      }
      if (src.synth.outage_pattern.empty()) {
        src.synth.outage_pattern = {{1, src.synth.n_subchannels, 0.0}};
      }
    }
  }
  return src;
}

}  // namespace

double parse_quantity(const Json& value, const std::string& unit, const std::string& field) {
  if (value.is_number()) return value.get<double>();
  if (!value.is_string()) throw InvalidInput(field + ": expected a number or string");
  const std::string text = value.get<std::string>();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw InvalidInput(field + ": cannot parse '" + text + "'");
  }
  std::string suffix = text.substr(used);
  suffix.erase(0, suffix.find_first_not_of(' '));
  struct Unit {
    const char* name;
    double scale;
  };
  static const Unit kBits[] = {{"", 1.0}, {"b", 1.0}, {"kb", 1e3}, {"Mb", 1e6}, {"Gb", 1e9}};
  static const Unit kRate[] = {
      {"", 1.0}, {"bps", 1.0}, {"kbps", 1e3}, {"Mbps", 1e6}, {"Gbps", 1e9}};
  const auto& table = unit == "bps" ? kRate : kBits;
  for (const Unit& u : table) {
    if (suffix == u.name) return v * u.scale;
  }
  throw InvalidInput(field + ": unknown unit suffix '" + suffix + "'");
}

Scenario parse_scenario(const Json& doc, const std::string& base_dir) {
  if (!doc.is_object()) throw InvalidInput("scenario: expected an object");
  reject_unknown(doc,
                 {"name", "channel", "sets", "sort", "slot_ms", "max_rate", "sweep", "solver",
                  "seed"},
                 "scenario");
  Scenario sc;
  sc.name = doc.value("name", std::string());
  sc.channel = parse_channel(require(doc, "channel", "scenario"), base_dir);
  if (doc.contains("seed")) sc.seed = doc["seed"].get<std::uint64_t>();

  const Json& sets = require(doc, "sets", "scenario");
  if (!sets.is_array() || sets.empty()) throw InvalidInput("sets: expected a non-empty array");
  for (std::size_t k = 0; k < sets.size(); ++k) {
    const std::string where = "sets[" + std::to_string(k) + "]";
    reject_unknown(sets[k], {"total_bits", "deadline_s"}, where);
    sc.sets.push_back({parse_quantity(require(sets[k], "total_bits", where), "bits",
                                      where + ".total_bits"),
                       require_number(require(sets[k], "deadline_s", where),
                                      where + ".deadline_s")});
  }
  const bool sort = doc.value("sort", false);
  const bool sorted = std::is_sorted(sc.sets.begin(), sc.sets.end(), [](const auto& a, const auto& b) {
    return a.deadline_s < b.deadline_s;
  });
  if (!sorted) {
    if (!sort) throw InvalidInput("sets: deadlines must be nondecreasing (or set \"sort\": true)");
    std::stable_sort(sc.sets.begin(), sc.sets.end(),
                     [](const auto& a, const auto& b) { return a.deadline_s < b.deadline_s; });
  }

  if (doc.contains("slot_ms")) {
    sc.slot_ms = require_number(doc["slot_ms"], "slot_ms");
    if (!(*sc.slot_ms > 0.0)) throw InvalidInput("slot_ms: must be > 0");
    const double slot_s = *sc.slot_ms / 1000.0;
    for (std::size_t k = 0; k < sc.sets.size(); ++k) {
      const double slots = sc.sets[k].deadline_s / slot_s;
      if (std::abs(slots - std::round(slots)) > 1e-9 * std::max(1.0, slots)) {
        throw InvalidInput("sets[" + std::to_string(k) + "].deadline_s: not a multiple of slot_ms");
      }
    }
  }
  if (doc.contains("max_rate")) sc.max_rate_bps = parse_quantity(doc["max_rate"], "bps", "max_rate");

  if (doc.contains("sweep")) {
    const Json& sw = doc["sweep"];
    reject_unknown(sw, {"variable", "values"}, "sweep");
    Sweep s;
    const std::string var = require(sw, "variable", "sweep").get<std::string>();
    if (var == "total_bits_scale") {
      s.variable = SweepVariable::kTotalBitsScale;
    } else if (var == "cnr_shift_db") {
      s.variable = SweepVariable::kCnrShiftDb;
    } else if (var == "outage_scale") {
      s.variable = SweepVariable::kOutageScale;
    } else {
      throw InvalidInput("sweep.variable: unknown variable '" + var + "'");
    }
    for (const Json& v : require(sw, "values", "sweep")) s.values.push_back(require_number(v, "sweep.values"));
    if (s.values.empty()) throw InvalidInput("sweep.values: must not be empty");
    sc.sweep = std::move(s);
  }

  if (doc.contains("solver")) {
    const Json& so = doc["solver"];
    reject_unknown(so, {"delta", "oracle", "grid_points", "baseline", "ideal_variant"}, "solver");
    if (so.contains("delta")) sc.solver.delta = require_number(so["delta"], "solver.delta");
    sc.solver.oracle = so.value("oracle", false);
    sc.solver.grid_points = so.value("grid_points", 200);
    sc.solver.baseline = so.value("baseline", true);
    sc.solver.ideal_variant = so.value("ideal_variant", false);
  }
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open scenario file " + path);
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  const std::filesystem::path dir = std::filesystem::path(path).parent_path();
  return parse_scenario(doc, dir.empty() ? "." : dir.string());
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("BITALLOC_SEED"); env != nullptr && *env != '\0') {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw InvalidInput(std::string("BITALLOC_SEED: not an unsigned integer: ") + env);
    }
  }
  return 0;
}

ChannelProfile resolve_channel(const Scenario& scenario, std::uint64_t seed) {
  const ChannelSource& src = scenario.channel;
  switch (src.kind) {
    case ChannelSource::Kind::kInline:
      return *src.inline_profile;
    case ChannelSource::Kind::kCsv:
      return load_channel_csv(src.csv_path, src.spacing_hz);
    case ChannelSource::Kind::kSynth: {
      SynthParams p = src.synth;
      if (!src.synth_has_seed) p.seed = seed;
      return synth_channel(p);
    }
  }
  throw InternalError("unknown channel source");
}

std::string to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::kTotalBitsScale:
      return "total_bits_scale";
    case SweepVariable::kCnrShiftDb:
      return "cnr_shift_db";
    case SweepVariable::kOutageScale:
      return "outage_scale";
  }
  return "unknown";
}

}  // namespace bitalloc
