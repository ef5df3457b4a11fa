#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "quadblockade/cli/config.hpp"

namespace quadblockade::cli {

inline constexpr int kCsvSchemaVersion = 1;

/// One curve or map of a figure, e.g. the spr:2 line of the thermal plot.
struct LabeledSweep {
  std::string label;
  SweepResult result;
};

enum class PlotKind { line, heat };

struct RunOutput {
  std::string name;     // file stem, e.g. "fig2"
  std::string command;  // "sweep" or "reproduce"
  Config config;
  PlotKind plot = PlotKind::line;
  std::vector<LabeledSweep> sweeps;

  double failure_fraction() const;
};

const std::vector<std::string>& csv_header();
void write_csv(std::ostream& out, const RunOutput& run);
Json to_json(const RunOutput& run);
/// Canonical text form used for every JSON file the tool writes.
std::string dump_json(const Json& doc);
/// Parses a results file and re-serializes it.
std::string reemit_json(const std::string& text);

/// g2 against the innermost axis; 2-D grids give one curve per axis1 value.
void write_line_svg(std::ostream& out, const RunOutput& run);
/// Heat map of numeric g2 over a 2-D grid, with the g2 = 1 level marked.
void write_heat_svg(std::ostream& out, const RunOutput& run);

/// Writes <name>.{csv,json,svg} per `output.formats` and echoes the resolved
/// configuration to config.json. Returns the files written.
std::vector<std::filesystem::path> write_outputs(const RunOutput& run);

}  // namespace quadblockade::cli
