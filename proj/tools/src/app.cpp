#include "quadblockade/cli/app.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <random>

#include "CLI11.hpp"
#include "quadblockade/errors.hpp"
#include "quadblockade/lindblad.hpp"
#include "quadblockade/oracles.hpp"
#include "quadblockade/perturbation.hpp"

namespace quadblockade::cli {

namespace {

struct Flags {
  std::optional<std::string> config_path;
  std::map<std::string, double> numbers;
  std::map<std::string, int> integers;
  std::optional<std::string> drive, out_dir, formats;
  std::vector<std::string> overrides;
  std::string log_level = "warn";
};

void add_common_flags(CLI::App& cmd, Flags& flags, bool model_flags) {
  cmd.add_option("--config", flags.config_path, "flat JSON config with dotted keys")->check(CLI::ExistingFile);
  cmd.add_option("--set", flags.overrides, "key=value override applied after the config file");
  cmd.add_option("--log-level", flags.log_level, "debug, info, warn, error or off")
      ->check(CLI::IsMember({"debug", "info", "warn", "error", "off"}));
  cmd.add_option("--out", flags.out_dir, "output directory");
  cmd.add_option("--formats", flags.formats, "comma-separated subset of csv,json,svg");
  if (!model_flags) return;
  const std::pair<const char*, const char*> numbers[] = {
      {"--g0", "param.g0"},           {"--delta-c", "param.delta_c"},         {"--gamma-c", "param.gamma_c"},
      {"--gamma-m", "param.gamma_m"}, {"--n-th", "param.n_th"},               {"--omega-drive", "param.omega_drive"},
      {"--omega-m", "param.omega_m"},
  };
  for (const auto& [flag, key] : numbers) {
    cmd.add_option_function<double>(flag, [&flags, k = std::string(key)](double v) { flags.numbers[k] = v; },
                                    std::string("sets ") + key);
  }
  cmd.add_option_function<int>(
      "--n-photon-max", [&flags](int v) { flags.integers["truncation.n_photon_max"] = v; }, "photon cutoff");
  cmd.add_option_function<int>(
      "--n-phonon-max", [&flags](int v) { flags.integers["truncation.n_phonon_max"] = v; },
      "largest phonon cutoff tried by the refinement");
  cmd.add_option("--drive", flags.drive, "fixed, spr:l or tpr:l");
}

Json preset_defaults(const std::string& figure) {
  Json j{{"param.gamma_c", 0.1}, {"param.omega_drive", 0.01}, {"param.gamma_m", 0.001}, {"param.n_th", 0.0}};
  if (figure == "fig2") {
    j.update(Json{{"sweep.axis1.parameter", "delta_c"},
                  {"sweep.axis1.start", -5.0},
                  {"sweep.axis1.stop", 1.0},
                  {"sweep.axis1.points", 601},
                  {"drive", "fixed"}});
  } else if (figure == "fig3a" || figure == "fig3b") {
    j.update(Json{{"sweep.axis1.parameter", "g0"},
                  {"sweep.axis1.start", 0.05},
                  {"sweep.axis1.stop", 3.0},
                  {"sweep.axis1.points", 60},
                  {"sweep.axis2.parameter", "gamma_c"},
                  {"sweep.axis2.start", 0.02},
                  {"sweep.axis2.stop", 2.0},
                  {"sweep.axis2.points", 60},
                  {"solvers.analytic", false},
                  {"drive", figure == "fig3a" ? "spr:0" : "spr:2"}});
  } else if (figure == "fig4") {
    j.update(Json{{"param.g0", 0.8},
                  {"sweep.axis1.parameter", "n_th"},
                  {"sweep.axis1.start", 0.0},
                  {"sweep.axis1.stop", 1.0},
                  {"sweep.axis1.points", 21}});
  } else {
    throw ParameterError("unknown figure '" + figure + "'");
  }
  return j;
}

Config resolve(const Flags& flags, const std::optional<std::string>& figure) {
  Config config = Config::defaults();
  if (figure) config.merge(preset_defaults(*figure));
  if (flags.config_path) config.merge_file(*flags.config_path);
  for (const auto& [key, v] : flags.numbers) config.set(key, v);
  for (const auto& [key, v] : flags.integers) config.set(key, v);
  if (flags.drive) config.set("drive", *flags.drive);
  if (flags.out_dir) config.set("output.directory", *flags.out_dir);
  if (flags.formats) config.set("output.formats", *flags.formats);
  for (const auto& o : flags.overrides) config.apply_override(o);
  config.formats();  // validate early
  return config;
}

std::string show(const std::optional<double>& v) {
  if (!v) return "n/a";
  return fmt::format("{:.6g}", *v);
}

int cmd_point(const Config& config, bool echo, std::ostream& out) {
  ModelParams p = config.model();
  p.validate();
  const auto trunc = config.truncation();
  p.check_stability(trunc.n_photon_max);
  const auto drive = config.drive();
  p.delta_c = driven_detuning(p, drive);

  const auto rec = evaluate_point(p, config.solvers(), trunc);
  out << fmt::format("parameters: delta_c={:.6g} omega_m={:.6g} g0={:.6g} omega_drive={:.6g} gamma_c={:.6g} "
                     "gamma_m={:.6g} n_th={:.6g} drive={}\n",
                     p.delta_c, p.omega_m, p.g0, p.omega_drive, p.gamma_c, p.gamma_m, p.n_th, drive.label());
  out << "g2_numeric   " << show(rec.g2_numeric) << '\n';
  out << "g2_analytic  " << show(rec.g2_analytic) << '\n';
  out << fmt::format("P1           {:.6g}\nP2           {:.6g}\n", rec.p1, rec.p2);
  out << fmt::format("<a'a>        {:.6g}\n", rec.mean_photons);
  out << fmt::format("truncation   n_photon_max={} n_phonon_max={} ({} refinement steps)\n", trunc.n_photon_max,
                     rec.n_phonon_used, rec.truncation_steps);
  out << "status       " << status_name(rec.status) << (rec.message.empty() ? "" : ": " + rec.message) << '\n';
  out << "resonances (D: one-photon dip, P: two-photon peak; * = even sideband)\n";
  for (const auto& r : resonance_detunings(p, 4)) {
    out << fmt::format("  {:<3} delta_c = {:+.5f}{}\n", r.label, r.delta_c, r.dominant ? " *" : "");
  }
  if (echo) {
    std::filesystem::create_directories(config.output_directory());
    std::ofstream(config.output_directory() / "config.json", std::ios::binary) << dump_json(config.values());
  }
  return rec.status == PointStatus::ok ? kSuccess : kNumericFailure;
}

void summarize(const RunOutput& run, const std::vector<std::filesystem::path>& files, std::ostream& out) {
  for (const auto& s : run.sweeps) {
    const auto& r = s.result;
    out << fmt::format("{}{}: {} points, {} ok, {} skipped, {} unconverged, {} failed ({} threads)\n", run.name,
                       s.label.empty() ? "" : " " + s.label, r.records.size(), r.count(PointStatus::ok),
                       r.count(PointStatus::skipped), r.count(PointStatus::unconverged),
                       r.count(PointStatus::failed), r.threads);
  }
  for (const auto& f : files) out << "wrote " << f.string() << '\n';
}

int finish(const RunOutput& run, std::ostream& out, std::ostream& err) {
  const auto files = write_outputs(run);
  summarize(run, files, out);
  const double fraction = run.failure_fraction();
  if (fraction > kFailureBudget) {
    err << fmt::format("{:.1f}% of points failed (budget {:.0f}%)\n", 100 * fraction, 100 * kFailureBudget);
    return kNumericFailure;
  }
  return kSuccess;
}

bool is_grid(const SweepSpec& spec) {
  return spec.axis2 && spec.axis1.values.size() >= 4 && spec.axis2->values.size() >= 4;
}

struct Check {
  std::string name;
  bool passed;
  std::string detail;
};

int cmd_validate(std::ostream& out) {
  std::vector<Check> checks;
  auto run_check = [&](const std::string& name, const std::function<Check()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Check c;
    try {
      c = body();
    } catch (const std::exception& e) {
      c = {name, false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out << fmt::format("[{}] {:<34} {} ({:.2f} s)\n", c.passed ? "PASS" : "FAIL", c.name, c.detail, s);
    out.flush();
    checks.push_back(c);
  };

  run_check("squeeze_oracle", [] {
    const auto r = squeeze_oracle(0.25 * std::log(4.2), 26, 72);
    return Check{"squeeze_oracle", r.passed(),
                 fmt::format("max_abs_error={:.3g} threshold={:.0e} n={}", r.max_abs_error, r.threshold,
                             r.comparison_count)};
  });
  run_check("spr_tpr_identity", [] {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      ModelParams p;
      p.g0 = 1.0 - u(rng);
      p.gamma_c = 0.001 + 2.0 * u(rng);
      worst = std::max(worst, std::abs(g2_spr(p) * g2_tpr(p) - 1.0));
    }
    return Check{"spr_tpr_identity", worst < 1e-12, fmt::format("max_abs_error={:.3g} threshold=1e-12", worst)};
  });
  run_check("coherent_limit", [] {
    ModelParams p;
    p.gamma_c = 0.1;
    p.omega_drive = 0.01;
    const FockSpace space{5, 9};
    const auto rho = steady_state(build_liouvillian(p, space));
    const double g2 = g2_numeric(rho, space);
    const double n = photon_moments(rho).mean_photons;
    return Check{"coherent_limit", std::abs(g2 - 1.0) < 1e-4 && std::abs(n - 0.04) < 1e-6,
                 fmt::format("g2={:.8f} <n>={:.8f}", g2, n)};
  });
  for (const auto& smoke : solver_smoke_set()) {
    run_check("evolve_vs_steady " + smoke.name, [&] {
      const auto r = cross_validate_steady_state(smoke);
      return Check{"evolve_vs_steady " + smoke.name, r.passed(),
                   fmt::format("trace_distance={:.3g} threshold={:.0e}", r.max_abs_error, r.threshold)};
    });
  }
  run_check("degenerate_error_path", [] {
    auto smoke = solver_smoke_set().front();
    smoke.params.gamma_c = 0.0;
    try {
      steady_state(build_liouvillian(smoke.params, smoke.space));
    } catch (const DegenerateSteadyStateError& e) {
      return Check{"degenerate_error_path", true, "gamma_c=0 raises DegenerateSteadyStateError"};
    }
    return Check{"degenerate_error_path", false, "gamma_c=0 returned a state"};
  });

  const auto failed = std::count_if(checks.begin(), checks.end(), [](const Check& c) { return !c.passed; });
  out << fmt::format("validate: {} of {} checks passed\n", checks.size() - failed, checks.size());
  return failed == 0 ? kSuccess : kNumericFailure;
}

}  // namespace

const std::vector<std::string>& figure_names() {
  static const std::vector<std::string> names{"fig2", "fig3a", "fig3b", "fig4"};
  return names;
}

RunOutput reproduce_preset(const std::string& figure, const Config& config) {
  RunOutput run;
  run.name = figure;
  run.command = "reproduce";
  run.config = config;
  const SweepSpec spec = config.sweep();
  if (figure == "fig2") {
    // Below, above and well above the cavity linewidth.
    for (double g0 : {0.05, 0.3, 0.8}) {
      SweepSpec s = spec;
      s.base.g0 = g0;
      run.sweeps.push_back({fmt::format("g0={}", g0), run_sweep(s)});
    }
  } else if (figure == "fig3a" || figure == "fig3b") {
    run.plot = PlotKind::heat;
    run.sweeps.push_back({spec.drive.label(), run_sweep(spec)});
  } else if (figure == "fig4") {
    for (const char* drive : {"spr:0", "spr:2"}) {
      SweepSpec s = spec;
      s.drive = DriveCondition::parse(drive);
      run.sweeps.push_back({drive, run_sweep(s)});
    }
  } else {
    throw ParameterError("unknown figure '" + figure + "'");
  }
  return run;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Photon blockade in quadratic optomechanics: steady-state g2(0) sweeps and figure presets",
               "quadblockade"};
  app.require_subcommand(1);
  Flags flags;
  std::string figure;

  auto* point = app.add_subcommand("point", "g2(0) and populations at one parameter point");
  add_common_flags(*point, flags, true);
  auto* sweep = app.add_subcommand("sweep", "grid sweep described by sweep.axis1.* / sweep.axis2.* keys");
  add_common_flags(*sweep, flags, true);
  auto* reproduce = app.add_subcommand("reproduce", "run a figure preset");
  add_common_flags(*reproduce, flags, true);
  reproduce->add_option("figure", figure, "fig2, fig3a, fig3b or fig4")
      ->required()
      ->check(CLI::IsMember(figure_names()));
  auto* validate = app.add_subcommand("validate", "run the oracle suite");
  validate->add_option("--log-level", flags.log_level, "debug, info, warn, error or off")
      ->check(CLI::IsMember({"debug", "info", "warn", "error", "off"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kParameterFailure;
  }

  spdlog::set_level(spdlog::level::from_str(flags.log_level));
  try {
    if (validate->parsed()) return cmd_validate(out);
    const std::optional<std::string> fig = reproduce->parsed() ? std::optional(figure) : std::nullopt;
    const Config config = resolve(flags, fig);
    if (point->parsed()) return cmd_point(config, flags.out_dir.has_value(), out);
    if (sweep->parsed()) {
      RunOutput run;
      run.name = "sweep";
      run.command = "sweep";
      run.config = config;
      const auto spec = config.sweep();
      run.plot = is_grid(spec) ? PlotKind::heat : PlotKind::line;
      run.sweeps.push_back({spec.drive.label(), run_sweep(spec)});
      return finish(run, out, err);
    }
    return finish(reproduce_preset(figure, config), out, err);
  } catch (const ParameterError& e) {
    err << "parameter error: " << e.what() << '\n';
    return kParameterFailure;
  } catch (const DimensionError& e) {
    err << "parameter error: " << e.what() << '\n';
    return kParameterFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumericFailure;
  }
}

}  // namespace quadblockade::cli
