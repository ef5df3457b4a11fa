#include "quadblockade/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <string>

#include <spdlog/spdlog.h>
#include <tbb/blocked_range.h>
#include <tbb/info.h>
#include <tbb/parallel_for.h>
#include <tbb/task_arena.h>

#include "quadblockade/errors.hpp"
#include "quadblockade/lindblad.hpp"
#include "quadblockade/perturbation.hpp"
#include "quadblockade/spectrum.hpp"
#include "quadblockade/version.hpp"

namespace quadblockade {

namespace {

struct ParameterEntry {
  ParameterId id;
  std::string_view name;
  std::string_view dashed;
};

constexpr ParameterEntry kParameters[] = {
    {ParameterId::delta_c, "delta_c", "delta-c"},
    {ParameterId::omega_m, "omega_m", "omega-m"},
    {ParameterId::g0, "g0", "g0"},
    {ParameterId::omega_drive, "omega_drive", "omega-drive"},
    {ParameterId::gamma_c, "gamma_c", "gamma-c"},
    {ParameterId::gamma_m, "gamma_m", "gamma-m"},
    {ParameterId::n_th, "n_th", "n-th"},
};

}  // namespace

std::string_view parameter_name(ParameterId id) {
  for (const auto& e : kParameters) {
    if (e.id == id) return e.name;
  }
  return "?";
}

ParameterId parse_parameter(std::string_view name) {
  for (const auto& e : kParameters) {
    if (name == e.name || name == e.dashed) return e.id;
  }
  throw ParameterError("unknown parameter '" + std::string(name) + "'");
}

double& parameter_ref(ModelParams& params, ParameterId id) {
  switch (id) {
    case ParameterId::delta_c: return params.delta_c;
    case ParameterId::omega_m: return params.omega_m;
    case ParameterId::g0: return params.g0;
    case ParameterId::omega_drive: return params.omega_drive;
    case ParameterId::gamma_c: return params.gamma_c;
    case ParameterId::gamma_m: return params.gamma_m;
    case ParameterId::n_th: return params.n_th;
  }
  throw ParameterError("invalid parameter id");
}

double parameter_value(const ModelParams& params, ParameterId id) {
  ModelParams copy = params;
  return parameter_ref(copy, id);
}

std::vector<double> linspace(double first, double last, int n) {
  if (n < 1) throw ParameterError("linspace needs at least one point");
  std::vector<double> out(static_cast<std::size_t>(n));
  if (n == 1) {
    out[0] = first;
    return out;
  }
  const double step = (last - first) / (n - 1);
  for (int k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = first + k * step;
  out.back() = last;
  return out;
}

DriveCondition DriveCondition::parse(std::string_view text) {
  if (text == "fixed") return {};
  const auto colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  DriveCondition out;
  if (head == "spr") {
    out.kind = DriveKind::spr;
  } else if (head == "tpr") {
    out.kind = DriveKind::tpr;
  } else {
    throw ParameterError("drive must be fixed, spr:<l> or tpr:<l>, got '" + std::string(text) + "'");
  }
  if (colon == std::string_view::npos) return out;
  const std::string_view tail = text.substr(colon + 1);
  const auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), out.sideband);
  if (ec != std::errc() || ptr != tail.data() + tail.size() || out.sideband < 0) {
    throw ParameterError("bad sideband index in drive '" + std::string(text) + "'");
  }
  return out;
}

std::string DriveCondition::label() const {
  switch (kind) {
    case DriveKind::fixed: return "fixed";
    case DriveKind::spr: return "spr:" + std::to_string(sideband);
    case DriveKind::tpr: return "tpr:" + std::to_string(sideband);
  }
  return "?";
}

double driven_detuning(const ModelParams& params, const DriveCondition& drive) {
  switch (drive.kind) {
    case DriveKind::fixed:
      return params.delta_c;
    case DriveKind::spr: {
      const auto lvl = dressed_level(params, 1, 0);
      return -(lvl.delta_s + drive.sideband * lvl.omega_s);
    }
    case DriveKind::tpr: {
      const auto lvl = dressed_level(params, 2, 0);
      return -(lvl.delta_s + drive.sideband * lvl.omega_s) / 2.0;
    }
  }
  return params.delta_c;
}

void SweepSpec::validate() const {
  auto check_axis = [](const Axis& axis, const char* which) {
    if (axis.values.empty()) throw ParameterError(std::string(which) + " has no values");
    for (double v : axis.values) {
      if (!std::isfinite(v)) throw ParameterError(std::string(which) + " contains a non-finite value");
    }
  };
  check_axis(axis1, "axis1");
  if (axis2) {
    check_axis(*axis2, "axis2");
    if (axis2->parameter == axis1.parameter) throw ParameterError("both axes scan the same parameter");
  }
  if (!solvers.analytic && !solvers.numeric) throw ParameterError("no solver requested");
  if (truncation.n_photon_max < 2 || truncation.phonon_seed < 1 ||
      truncation.phonon_cap < truncation.phonon_seed || !(truncation.rel_tolerance > 0.0)) {
    throw ParameterError("invalid truncation control");
  }
}

std::size_t SweepSpec::size() const noexcept {
  return axis1.values.size() * (axis2 ? axis2->values.size() : 1);
}

std::string_view status_name(PointStatus status) {
  switch (status) {
    case PointStatus::ok: return "ok";
    case PointStatus::skipped: return "skipped";
    case PointStatus::unconverged: return "unconverged";
    case PointStatus::failed: return "failed";
  }
  return "?";
}

std::size_t SweepResult::count(PointStatus status) const noexcept {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [&](const auto& r) { return r.status == status; }));
}

double SweepResult::failure_fraction() const noexcept {
  if (records.empty()) return 0.0;
  const auto bad = count(PointStatus::failed) + count(PointStatus::unconverged);
  return static_cast<double>(bad) / static_cast<double>(records.size());
}

namespace {

struct NumericOutcome {
  double g2 = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
  double mean_photons = 0.0;
  int n_phonon = 0;
  int steps = 0;
  bool converged = false;
};

NumericOutcome solve_numeric(const ModelParams& params, const TruncationControl& trunc) {
  SteadyStateOptions options;
  options.retry_truncation = false;

  NumericOutcome out;
  std::optional<double> previous;
  int nb = trunc.phonon_seed;
  for (;;) {
    ++out.steps;
    const FockSpace space{trunc.n_photon_max, nb};
    try {
      const auto report = solve_steady_state(build_liouvillian(params, space), options);
      const double g2 = g2_numeric(report.state, space);
      const auto moments = photon_moments(report.state);
      out.g2 = g2;
      out.mean_photons = moments.mean_photons;
      out.p1 = 0.0;
      out.p2 = 0.0;
      for (int m = 0; m < space.phonon_levels(); ++m) {
        out.p1 += report.state.rho(space.index(1, m), space.index(1, m)).real();
        out.p2 += report.state.rho(space.index(2, m), space.index(2, m)).real();
      }
      out.n_phonon = nb;
      if (previous && std::abs(g2 - *previous) <= trunc.rel_tolerance * std::abs(g2)) {
        out.converged = true;
        return out;
      }
      previous = g2;
    } catch (const TruncationError&) {
      if (nb >= trunc.phonon_cap) throw;
      previous.reset();
    }
    if (nb >= trunc.phonon_cap) return out;
    nb = std::min(2 * nb, trunc.phonon_cap);
  }
}

}  // namespace

SweepRecord evaluate_point(const ModelParams& params, const SolverSet& solvers,
                           const TruncationControl& truncation) {
  const auto start = std::chrono::steady_clock::now();
  SweepRecord rec;
  rec.params = params;
  try {
    params.validate();
    const int s_needed = solvers.numeric ? truncation.n_photon_max : 2;
    for (int s = 1; s <= s_needed; ++s) {
      if (!params.is_stable(s)) {
        rec.status = PointStatus::skipped;
        rec.message = "unstable: omega_m + 4 s g0 <= 0 at s=" + std::to_string(s);
        return rec;
      }
    }
    if (solvers.analytic) {
      const auto stats = photon_statistics(longtime_amplitudes(params));
      rec.g2_analytic = stats.g2;
      rec.p1 = stats.p1;
      rec.p2 = stats.p2;
    }
    if (solvers.numeric) {
      const auto num = solve_numeric(params, truncation);
      rec.g2_numeric = num.g2;
      rec.mean_photons = num.mean_photons;
      rec.n_phonon_used = num.n_phonon;
      rec.truncation_steps = num.steps;
      if (!solvers.analytic) {
        rec.p1 = num.p1;
        rec.p2 = num.p2;
      }
      if (!num.converged) {
        rec.status = PointStatus::unconverged;
        rec.message = "g2 not converged in n_phonon_max at cap " + std::to_string(truncation.phonon_cap);
      }
    }
  } catch (const Error& e) {
    rec.status = PointStatus::failed;
    rec.message = e.what();
  }
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

unsigned sweep_thread_count() {
  const int hw = tbb::info::default_concurrency();
  unsigned n = static_cast<unsigned>(std::max(hw, 1));
  if (const char* env = std::getenv("QUADBLOCKADE_THREADS")) {
    const std::string_view text(env);
    unsigned cap = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), cap);
    if (ec == std::errc() && ptr == text.data() + text.size() && cap > 0) {
      n = std::min(n, cap);
    } else {
      spdlog::warn("ignoring QUADBLOCKADE_THREADS='{}'", text);
    }
  }
  return n;
}

SweepResult run_sweep(const SweepSpec& spec) {
  spec.validate();
  SweepResult result;
  result.spec = spec;
  result.version = kVersion;
  result.threads = sweep_thread_count();

  const std::size_t n2 = spec.axis2 ? spec.axis2->values.size() : 1;
  const std::size_t total = spec.size();
  result.records.resize(total);

  auto work = [&](std::size_t k) {
    const std::size_t i1 = k / n2;
    const std::size_t i2 = k % n2;
    ModelParams p = spec.base;
    parameter_ref(p, spec.axis1.parameter) = spec.axis1.values[i1];
    if (spec.axis2) parameter_ref(p, spec.axis2->parameter) = spec.axis2->values[i2];

    SweepRecord rec;
    bool resolved = true;
    try {
      p.delta_c = driven_detuning(p, spec.drive);
    } catch (const ParameterError& e) {
      rec.params = p;
      rec.status = PointStatus::skipped;
      rec.message = e.what();
      resolved = false;
    }
    if (resolved) rec = evaluate_point(p, spec.solvers, spec.truncation);
    rec.i1 = i1;
    rec.i2 = i2;
    result.records[k] = std::move(rec);
  };

  tbb::task_arena arena(static_cast<int>(result.threads));
  arena.execute([&] {
    tbb::parallel_for(tbb::blocked_range<std::size_t>(0, total, 1),
                      [&](const tbb::blocked_range<std::size_t>& range) {
                        for (std::size_t k = range.begin(); k != range.end(); ++k) work(k);
                      });
  });

  spdlog::info("sweep finished: {} points, {} skipped, {} unconverged, {} failed", total,
               result.count(PointStatus::skipped), result.count(PointStatus::unconverged),
               result.count(PointStatus::failed));
  return result;
}

std::vector<ResonanceDetuning> resonance_detunings(const ModelParams& params, int l_max) {
  if (l_max < 0) throw ParameterError("l_max must be nonnegative");
  params.check_stability(2);
  const auto one = dressed_level(params, 1, 0);
  const auto two = dressed_level(params, 2, 0);
  std::vector<ResonanceDetuning> out;
  for (int l = 0; l <= l_max; ++l) {
    const bool even = l % 2 == 0;
    out.push_back({"D" + std::to_string(l), l, true, even, -(one.delta_s + l * one.omega_s)});
    out.push_back({"P" + std::to_string(l), l, false, even, -(two.delta_s + l * two.omega_s) / 2.0});
  }
  return out;
}

}  // namespace quadblockade
