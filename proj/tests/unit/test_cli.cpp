#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "quadblockade/cli/app.hpp"
#include "quadblockade/errors.hpp"
#include "quadblockade/lindblad.hpp"
#include "quadblockade/oracles.hpp"

using namespace quadblockade;
using namespace quadblockade::cli;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "quadblockade");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("quadblockade-test-" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("config defaults, file values and overrides") {
  auto config = Config::defaults();
  CHECK(config.number("param.gamma_m") == 0.001);
  CHECK(config.string("drive") == "fixed");

  const auto dir = scratch("config");
  fs::create_directories(dir);
  std::ofstream(dir / "c.json") << R"({"param.g0": 0.8, "drive": "spr:2", "sweep.axis1.points": 11})";
  config.merge_file(dir / "c.json");
  config.apply_override("param.g0=0.3");
  config.apply_override("drive=tpr:1");
  CHECK(config.model().g0 == 0.3);
  CHECK(config.drive().kind == DriveKind::tpr);
  CHECK(config.sweep().axis1.values.size() == 11);
  CHECK_FALSE(config.sweep().axis2.has_value());

  CHECK_THROWS_AS(config.apply_override("param.kappa=1"), ParameterError);
  CHECK_THROWS_AS(config.apply_override("param.g0=fast"), ParameterError);
  CHECK_THROWS_AS(config.apply_override("novalue"), ParameterError);
  config.set("output.formats", "csv,pdf");
  CHECK_THROWS_AS(config.formats(), ParameterError);
}

TEST_CASE("csv header is the stable schema") {
  const std::vector<std::string> expected{"param.delta_c", "param.omega_m", "param.g0",   "param.omega_drive",
                                          "param.gamma_c", "param.gamma_m", "param.n_th", "g2_numeric",
                                          "g2_analytic",   "p1",            "p2",         "n_phonon_used",
                                          "status"};
  CHECK(csv_header() == expected);
}

TEST_CASE("csv rows leave missing solvers empty") {
  RunOutput run;
  run.config = Config::defaults();
  SweepResult res;
  SweepRecord rec;
  rec.params.g0 = 0.5;
  rec.g2_analytic = 0.25;
  rec.status = PointStatus::skipped;
  res.records.push_back(rec);
  run.sweeps.push_back({"", res});
  std::ostringstream out;
  write_csv(out, run);
  std::string header, row;
  std::istringstream in(out.str());
  std::getline(in, header);
  std::getline(in, row);
  CHECK(row == "0,1,0.5,0,0.1,0.001,0,,0.25,0,0,0,skipped");
}

TEST_CASE("sweep command writes every format and round-trips its JSON") {
  const auto dir = scratch("sweep");
  const auto r = invoke({"sweep", "--g0", "0.8", "--gamma-c", "0.1", "--omega-drive", "0.01", "--out", dir.string(),
                         "--set", "sweep.axis1.start=-0.6", "--set", "sweep.axis1.stop=-0.4", "--set",
                         "sweep.axis1.points=3", "--set", "truncation.n_phonon_seed=12", "--set",
                         "truncation.n_phonon_max=48"});
  INFO(r.err);
  REQUIRE(r.code == kSuccess);
  for (const char* f : {"sweep.csv", "sweep.json", "sweep.svg", "config.json"}) CHECK(fs::exists(dir / f));

  const auto echoed = Json::parse(slurp(dir / "config.json"));
  CHECK(echoed["param.g0"] == 0.8);
  CHECK(echoed["sweep.axis1.points"] == 3);

  const std::string text = slurp(dir / "sweep.json");
  CHECK(reemit_json(text) == text);
  const auto doc = Json::parse(text);
  CHECK(doc["csv_schema_version"] == kCsvSchemaVersion);
  CHECK(doc["sweeps"][0]["records"].size() == 3);

  std::ifstream csv(dir / "sweep.csv");
  std::string line;
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == 4);
  const auto svg = slurp(dir / "sweep.svg");
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("stroke-dasharray") != std::string::npos);
}

TEST_CASE("heat map marks the g2 = 1 level") {
  RunOutput run;
  run.name = "grid";
  run.config = Config::defaults();
  run.plot = PlotKind::heat;
  SweepResult res;
  res.spec.axis1 = {ParameterId::g0, {0.1, 0.2}};
  res.spec.axis2 = Axis{ParameterId::gamma_c, {0.1, 0.2}};
  for (double g2 : {0.5, 2.0, 0.5, 0.5}) {
    SweepRecord rec;
    rec.g2_numeric = g2;
    res.records.push_back(rec);
  }
  run.sweeps.push_back({"spr:0", res});
  std::ostringstream out;
  write_heat_svg(out, run);
  CHECK(out.str().find("<path fill=\"none\" stroke=\"black\"") != std::string::npos);
  CHECK(out.str().find(" d=\"M") != std::string::npos);
}

TEST_CASE("point command in the coherent limit") {
  const auto r = invoke({"point", "--g0", "0", "--delta-c", "0", "--gamma-c", "0.1", "--omega-drive", "0.01"});
  INFO(r.out << r.err);
  CHECK(r.code == kSuccess);
  const auto pos = r.out.find("g2_numeric");
  REQUIRE(pos != std::string::npos);
  CHECK(std::abs(std::stod(r.out.substr(pos + 12)) - 1.0) < 1e-4);
  CHECK(r.out.find("<a'a>        0.04") != std::string::npos);
}

TEST_CASE("point command reports the blockade and the resonance table") {
  const auto r = invoke({"point", "--g0", "0.8", "--drive", "spr:0", "--gamma-c", "0.1", "--omega-drive", "0.01"});
  INFO(r.out << r.err);
  CHECK(r.code == kSuccess);
  CHECK(r.out.find("D0  delta_c = -0.52470 *") != std::string::npos);
  const auto pos = r.out.find("g2_numeric");
  REQUIRE(pos != std::string::npos);
  CHECK(std::stod(r.out.substr(pos + 12)) < 1.0);
}

TEST_CASE("exit codes") {
  const auto unstable = invoke({"point", "--g0", "-0.3", "--n-photon-max", "4"});
  CHECK(unstable.code == kParameterFailure);
  CHECK(unstable.err.find("s=1") != std::string::npos);

  CHECK(invoke({"point", "--kappa", "1"}).code == kParameterFailure);
  CHECK(invoke({"reproduce", "fig9"}).code == kParameterFailure);
  CHECK(invoke({"point", "--drive", "resonant"}).code == kParameterFailure);
  CHECK(invoke({}).code == kParameterFailure);
  CHECK(invoke({"--help"}).code == kSuccess);

  // One of two points cannot be solved: above the failure budget.
  const auto dir = scratch("budget");
  const auto failing = invoke({"sweep", "--g0", "0.1", "--n-photon-max", "3", "--out", dir.string(), "--formats",
                               "csv", "--set", "sweep.axis1.parameter=gamma_c", "--set", "sweep.axis1.start=0",
                               "--set", "sweep.axis1.stop=0.2", "--set", "sweep.axis1.points=2", "--set",
                               "truncation.n_phonon_seed=5", "--set", "truncation.n_phonon_max=20"});
  INFO(failing.out << failing.err);
  CHECK(failing.code == kNumericFailure);
  CHECK(fs::exists(dir / "sweep.csv"));
  CHECK_FALSE(fs::exists(dir / "sweep.json"));
}

TEST_CASE("fig4 preset gives two nondecreasing curves") {
  auto config = Config::defaults();
  config.merge(Json{{"param.g0", 0.8},
                    {"sweep.axis1.parameter", "n_th"},
                    {"sweep.axis1.start", 0.0},
                    {"sweep.axis1.stop", 1.0},
                    {"sweep.axis1.points", 3}});
  const auto run = reproduce_preset("fig4", config);
  REQUIRE(run.sweeps.size() == 2);
  CHECK(run.sweeps[0].label == "spr:0");
  CHECK(run.sweeps[1].label == "spr:2");
  for (const auto& s : run.sweeps) {
    for (std::size_t k = 1; k < s.result.records.size(); ++k) {
      CHECK(*s.result.records[k].g2_numeric >= *s.result.records[k - 1].g2_numeric);
    }
  }
  CHECK_THROWS_AS(reproduce_preset("fig5", config), ParameterError);
}

TEST_CASE("lossless cavity surfaces a degenerate steady state") {
  auto smoke = solver_smoke_set().front();
  smoke.params.gamma_c = 0.0;
  CHECK_THROWS_AS(steady_state(build_liouvillian(smoke.params, smoke.space)), DegenerateSteadyStateError);
}
