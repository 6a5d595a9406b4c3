#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bitalloc/scenario.hpp"

namespace bitalloc {

enum class RunMode {
  kBasePoint,  // the scenario as written, sweep ignored
  kSweep,      // one record per sweep value
};

/// One flat CSV table: header plus rows of preformatted cells.
struct CsvSeries {
  std::string name;  // file stem, e.g. "energy_vs_bits"
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct ScenarioResult {
  Json document;
  std::vector<CsvSeries> series;
  int points = 0;
  int failed = 0;

  /// 0 all points solved, 2 some failed, 1 all failed.
  int exit_code() const;
};

ScenarioResult run_scenario(const Scenario& scenario, RunMode mode, std::uint64_t seed);

/// Two-space indented JSON with a trailing newline.
std::string render_document(const Json& document);
void write_series(const CsvSeries& series, const std::string& dir);

}  // namespace bitalloc
