#include "quadblockade/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "quadblockade/errors.hpp"

namespace quadblockade::cli {

namespace {

bool same_kind(const Json& a, const Json& b) {
  if (a.is_number() && b.is_number()) return true;
  return a.type() == b.type();
}

}  // namespace

Config Config::defaults() {
  Config c;
  const ModelParams p;
  const TruncationControl t;
  c.values_ = Json{
      {"param.delta_c", p.delta_c},
      {"param.omega_m", p.omega_m},
      {"param.g0", p.g0},
      {"param.omega_drive", 0.01},
      {"param.gamma_c", 0.1},
      {"param.gamma_m", p.gamma_m},
      {"param.n_th", p.n_th},
      {"drive", "fixed"},
      {"solvers.analytic", true},
      {"solvers.numeric", true},
      {"truncation.n_photon_max", t.n_photon_max},
      {"truncation.n_phonon_seed", t.phonon_seed},
      {"truncation.n_phonon_max", t.phonon_cap},
      {"truncation.rel_tolerance", t.rel_tolerance},
      {"sweep.axis1.parameter", "delta_c"},
      {"sweep.axis1.start", -5.0},
      {"sweep.axis1.stop", 1.0},
      {"sweep.axis1.points", 601},
      {"sweep.axis2.parameter", "gamma_c"},
      {"sweep.axis2.start", 0.02},
      {"sweep.axis2.stop", 2.0},
      {"sweep.axis2.points", 0},
      {"output.directory", "quadblockade-out"},
      {"output.formats", "csv,json,svg"},
  };
  return c;
}

void Config::merge_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot read config file " + path.string());
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParameterError("config file " + path.string() + ": " + e.what());
  }
  merge(doc);
}

void Config::merge(const Json& flat) {
  if (!flat.is_object()) throw ParameterError("config must be a flat JSON object");
  for (const auto& [key, value] : flat.items()) set(key, value);
}

void Config::apply_override(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ParameterError("override must look like key=value: " + std::string(assignment));
  }
  std::string key(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));
  Json value = Json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  set(key, std::move(value));
}

void Config::set(const std::string& key, Json value) {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ParameterError("unknown config key '" + key + "'");
  if (!same_kind(*it, value)) {
    throw ParameterError("config key '" + key + "' expects a " + std::string(it->type_name()) + ", got " +
                         value.dump());
  }
  if (value.is_number() && !std::isfinite(value.get<double>())) {
    throw ParameterError("config key '" + key + "' must be finite");
  }
  *it = std::move(value);
}

const Json& Config::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ParameterError("unknown config key '" + key + "'");
  return *it;
}

double Config::number(const std::string& key) const { return get(key).get<double>(); }

int Config::integer(const std::string& key) const {
  const double v = number(key);
  if (v != std::floor(v)) throw ParameterError("config key '" + key + "' must be an integer");
  return static_cast<int>(v);
}

bool Config::boolean(const std::string& key) const { return get(key).get<bool>(); }
std::string Config::string(const std::string& key) const { return get(key).get<std::string>(); }

ModelParams Config::model() const {
  ModelParams p;
  p.delta_c = number("param.delta_c");
  p.omega_m = number("param.omega_m");
  p.g0 = number("param.g0");
  p.omega_drive = number("param.omega_drive");
  p.gamma_c = number("param.gamma_c");
  p.gamma_m = number("param.gamma_m");
  p.n_th = number("param.n_th");
  return p;
}

DriveCondition Config::drive() const { return DriveCondition::parse(string("drive")); }

SolverSet Config::solvers() const { return {boolean("solvers.analytic"), boolean("solvers.numeric")}; }

TruncationControl Config::truncation() const {
  TruncationControl t;
  t.n_photon_max = integer("truncation.n_photon_max");
  t.phonon_cap = integer("truncation.n_phonon_max");
  t.phonon_seed = std::min(integer("truncation.n_phonon_seed"), t.phonon_cap);
  t.rel_tolerance = number("truncation.rel_tolerance");
  if (t.n_photon_max < 2) throw ParameterError("truncation.n_photon_max must be at least 2");
  if (t.phonon_seed < 1) throw ParameterError("truncation.n_phonon_max must be at least 1");
  if (!(t.rel_tolerance > 0.0)) throw ParameterError("truncation.rel_tolerance must be positive");
  return t;
}

SweepSpec Config::sweep() const {
  auto axis = [&](const std::string& prefix) {
    const int n = integer(prefix + ".points");
    if (n < 1) throw ParameterError(prefix + ".points must be positive");
    return Axis{parse_parameter(string(prefix + ".parameter")),
                linspace(number(prefix + ".start"), number(prefix + ".stop"), n)};
  };
  SweepSpec spec;
  spec.base = model();
  spec.drive = drive();
  spec.solvers = solvers();
  spec.truncation = truncation();
  spec.axis1 = axis("sweep.axis1");
  if (integer("sweep.axis2.points") > 0) spec.axis2 = axis("sweep.axis2");
  spec.validate();
  return spec;
}

std::filesystem::path Config::output_directory() const { return string("output.directory"); }

std::vector<std::string> Config::formats() const {
  std::vector<std::string> out;
  std::stringstream in(string("output.formats"));
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    if (item != "csv" && item != "json" && item != "svg") {
      throw ParameterError("unknown output format '" + item + "' (csv, json, svg)");
    }
    out.push_back(item);
  }
  return out;
}

}  // namespace quadblockade::cli
