#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "quadblockade/sweep.hpp"

namespace quadblockade::cli {

using Json = nlohmann::ordered_json;

/// Flat dotted-key configuration, e.g. {"param.g0": 0.8, "drive": "spr:0"}.
/// Keys mirror the command-line flags with dashes turned into underscores.
class Config {
 public:
  /// Every recognised key at its default value.
  static Config defaults();

  /// Merges a flat JSON object from disk; unknown keys are a ParameterError.
  void merge_file(const std::filesystem::path& path);
  void merge(const Json& flat);
  /// `key=value`; the value is parsed as JSON when possible, else kept as a string.
  void apply_override(std::string_view assignment);
  void set(const std::string& key, Json value);

  const Json& get(const std::string& key) const;
  double number(const std::string& key) const;
  int integer(const std::string& key) const;
  bool boolean(const std::string& key) const;
  std::string string(const std::string& key) const;

  ModelParams model() const;
  DriveCondition drive() const;
  SolverSet solvers() const;
  TruncationControl truncation() const;
  /// Grid from `sweep.axis1.*` / `sweep.axis2.*`; axis2 is omitted when its points are 0.
  SweepSpec sweep() const;

  std::filesystem::path output_directory() const;
  std::vector<std::string> formats() const;

  const Json& values() const noexcept { return values_; }

 private:
  Json values_ = Json::object();
};

}  // namespace quadblockade::cli
