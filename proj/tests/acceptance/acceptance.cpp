// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any failed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "quadblockade/errors.hpp"
#include "quadblockade/lindblad.hpp"
#include "quadblockade/oracles.hpp"
#include "quadblockade/perturbation.hpp"
#include "quadblockade/spectrum.hpp"
#include "quadblockade/sweep.hpp"

using namespace quadblockade;

namespace {

int g_failures = 0;

void report(const std::string& id, bool ok, const std::string& detail) {
  if (!ok) ++g_failures;
  std::printf("[%s] %-28s %s\n", ok ? "PASS" : "FAIL", id.c_str(), detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void timed(const std::string& id, const std::function<void()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body();
  } catch (const std::exception& e) {
    report(id, false, std::string("exception: ") + e.what());
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("       %-28s runtime %.2f s\n", id.c_str(), s);
  std::fflush(stdout);
}

ModelParams fig2_params() {
  ModelParams p;
  p.g0 = 0.8;
  p.gamma_c = 0.1;
  p.omega_drive = 0.01;
  p.gamma_m = 0.001;
  p.n_th = 0.0;
  return p;
}

double resonance(const ModelParams& p, const std::string& label) {
  for (const auto& r : resonance_detunings(p, 4)) {
    if (r.label == label) return r.delta_c;
  }
  throw ParameterError("no resonance " + label);
}

// Location of the numeric extremum of the sweep inside [x - w, x + w].
double extremum_near(const SweepResult& res, double x, double w, bool minimum) {
  double best_x = std::nan("");
  double best = minimum ? INFINITY : -INFINITY;
  for (const auto& r : res.records) {
    if (!r.g2_numeric || std::abs(r.params.delta_c - x) > w) continue;
    const double v = *r.g2_numeric;
    if (minimum ? v < best : v > best) {
      best = v;
      best_x = r.params.delta_c;
    }
  }
  return best_x;
}

void check_relative(const std::string& id, double numeric, double analytic, double tol) {
  const double rel = std::abs(analytic - numeric) / std::abs(numeric);
  report(id, rel < tol, fmt("numeric=%.6g analytic=%.6g rel=%.3g tol=%.3g", numeric, analytic, rel, tol));
}

double numeric_g2(const ModelParams& p) {
  const auto rec = evaluate_point(p, {false, true}, {});
  if (!rec.g2_numeric) throw std::runtime_error("numeric g2 unavailable: " + rec.message);
  return *rec.g2_numeric;
}

void criterion_identity() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> gc(0.001, 2.0);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    ModelParams p;
    p.g0 = 1.0 - g(rng);  // (0, 1]
    p.gamma_c = gc(rng);
    worst = std::max(worst, std::abs(g2_spr(p) * g2_tpr(p) - 1.0));
  }
  report("1.spr_tpr_identity", worst < 1e-12, fmt("max |g_spr g_tpr - 1| = %.3g over 100 draws", worst));
}

void criterion_coherent() {
  ModelParams p;
  p.gamma_c = 0.1;
  p.omega_drive = 0.01;
  const FockSpace space{5, 9};
  const auto rho = steady_state(build_liouvillian(p, space));
  const double g2 = g2_numeric(rho, space);
  const double n = photon_moments(rho).mean_photons;
  report("2.coherent_g2", std::abs(g2 - 1.0) < 1e-4, fmt("g2=%.10f", g2));
  report("2.coherent_photons", std::abs(n - 0.04) < 1e-6, fmt("<n>=%.10f", n));
}

void criterion_squeeze() {
  const auto r = squeeze_oracle(0.25 * std::log(4.2), 26, 72);
  report("3.squeeze_oracle", r.passed(),
         fmt("max_abs_error=%.3g over %d elements", r.max_abs_error, r.comparison_count));
}

void criterion_fig2() {
  const ModelParams base = fig2_params();
  SweepSpec spec;
  spec.base = base;
  // Grid step 0.01; extends below -5 so that P4 lies inside the sweep.
  spec.axis1 = {ParameterId::delta_c, linspace(-6.5, 1.0, 751)};
  const auto res = run_sweep(spec);
  std::printf("       fig2 sweep: %zu points, %zu ok, %zu unconverged, %zu failed\n", res.records.size(),
              res.count(PointStatus::ok), res.count(PointStatus::unconverged),
              res.count(PointStatus::failed));

  for (const char* label : {"D0", "D2", "P0", "P2", "P4"}) {
    const double x = resonance(base, label);
    const bool dip = label[0] == 'D';
    const double found = extremum_near(res, x, 0.1, dip);
    report(std::string("4.") + (dip ? "minimum_" : "maximum_") + label,
           std::abs(found - x) <= 0.01 + 1e-9,
           fmt("resonance=%.5f numeric extremum=%.5f", x, found));
  }

  for (const char* label : {"D0", "P0"}) {
    ModelParams p = base;
    p.delta_c = resonance(base, label);
    check_relative(std::string("4.analytic_vs_numeric_") + label, numeric_g2(p), g2_analytic(longtime_amplitudes(p)),
                   0.10);
  }
  for (const char* label : {"D0", "P0"}) {
    ModelParams p = base;
    p.omega_drive = 0.001;
    p.gamma_m = 1e-6;
    p.delta_c = resonance(base, label);
    check_relative(std::string("4.weak_drive_") + label, numeric_g2(p), g2_analytic(longtime_amplitudes(p)), 0.05);
  }
}

void criterion_fig3() {
  SweepSpec spec;
  spec.base.omega_drive = 0.01;
  spec.base.gamma_m = 0.001;
  spec.axis1 = {ParameterId::g0, linspace(0.05, 3.0, 30)};
  spec.axis2 = Axis{ParameterId::gamma_c, linspace(0.02, 2.0, 30)};
  spec.drive = DriveCondition::parse("spr:0");
  spec.solvers = {false, true};
  const auto res = run_sweep(spec);
  std::printf("       fig3 grid: %zu points, %zu ok, %zu unconverged, %zu failed, %zu skipped\n",
              res.records.size(), res.count(PointStatus::ok), res.count(PointStatus::unconverged),
              res.count(PointStatus::failed), res.count(PointStatus::skipped));

  int deep = 0, deep_bad = 0;
  int pairs = 0, increases = 0;
  double worst_increase = 0.0;
  int unresolved_sub = 0;
  const std::size_t n2 = spec.axis2->values.size();
  for (const auto& r : res.records) {
    if (!r.g2_numeric) continue;
    const double g2 = *r.g2_numeric;
    if (g2 < 0.1) {
      ++deep;
      if (!(r.params.g0 > r.params.gamma_c)) ++deep_bad;
    }
    if (r.params.gamma_c > 1.0 && g2 < 1.0) ++unresolved_sub;
    if (r.i1 + 1 < spec.axis1.values.size()) {
      const auto& next = res.records[(r.i1 + 1) * n2 + r.i2];
      if (next.g2_numeric && g2 < 1.0 && *next.g2_numeric < 1.0) {
        ++pairs;
        if (*next.g2_numeric > g2) {
          ++increases;
          worst_increase = std::max(worst_increase, *next.g2_numeric - g2);
        }
      }
    }
  }
  report("5a.deep_blockade_g0_gt_gc", deep > 0 && deep_bad == 0,
         fmt("%d points with g2<0.1, %d violate g0>gamma_c", deep, deep_bad));
  report("5b.nonincreasing_in_g0", pairs > 0 && increases == 0,
         fmt("%d neighbouring pairs below 1, %d increases (largest %.3g)", pairs, increases, worst_increase));
  report("5c.unresolved_sideband", unresolved_sub > 0,
         fmt("%d points with gamma_c>1 and g2<1", unresolved_sub));

  ModelParams p = fig2_params();
  ModelParams spr0 = p, spr2 = p;
  spr0.delta_c = driven_detuning(p, DriveCondition::parse("spr:0"));
  spr2.delta_c = driven_detuning(p, DriveCondition::parse("spr:2"));
  const double a = numeric_g2(spr0), b = numeric_g2(spr2);
  report("5d.spr2_below_spr0", b < a, fmt("spr:0 g2=%.6g spr:2 g2=%.6g", a, b));
}

void criterion_fig4() {
  for (const char* drive : {"spr:0", "spr:2"}) {
    SweepSpec spec;
    spec.base = fig2_params();
    spec.axis1 = {ParameterId::n_th, {0.0, 0.05, 0.1, 0.2, 0.5, 1.0}};
    spec.drive = DriveCondition::parse(drive);
    spec.solvers = {false, true};
    const auto res = run_sweep(spec);
    bool ok = true;
    std::string values;
    for (std::size_t k = 0; k < res.records.size(); ++k) {
      const auto& r = res.records[k];
      if (!r.g2_numeric) {
        ok = false;
        values += " n/a";
        continue;
      }
      values += fmt(" %.5g", *r.g2_numeric);
      if (k > 0 && res.records[k - 1].g2_numeric && *r.g2_numeric < *res.records[k - 1].g2_numeric) ok = false;
    }
    report(std::string("6.thermal_") + drive, ok, "g2 =" + values);
  }
}

void criterion_kerr() {
  ModelParams p;
  p.g0 = 0.01;
  p.gamma_c = 0.001;
  const double kerr = p.gamma_c * p.gamma_c / (4.0 * std::pow(p.g0 * p.g0, 2) + p.gamma_c * p.gamma_c);
  const double spr = g2_spr(p);
  const double rel = std::abs(spr - kerr) / spr;
  report("7.kerr_limit", rel < 1e-3, fmt("g_spr=%.8g kerr=%.8g rel=%.3g", spr, kerr, rel));
}

void criterion_cross_validation() {
  for (const auto& c : solver_smoke_set()) {
    const auto r = cross_validate_steady_state(c);
    report("8.cross_validate_" + c.name, r.passed(), fmt("trace distance=%.3g", r.max_abs_error));
  }
}

}  // namespace

int main() {
  std::printf("acceptance: %u sweep threads\n", sweep_thread_count());
  timed("1.spr_tpr_identity", criterion_identity);
  timed("2.coherent_limit", criterion_coherent);
  timed("3.squeeze_oracle", criterion_squeeze);
  timed("7.kerr_limit", criterion_kerr);
  timed("6.thermal", criterion_fig4);
  timed("8.cross_validation", criterion_cross_validation);
  timed("4.fig2_structure", criterion_fig2);
  timed("5.fig3_structure", criterion_fig3);
  std::printf("acceptance: %d failing line(s)\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
