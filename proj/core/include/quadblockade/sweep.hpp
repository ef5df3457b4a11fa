#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "quadblockade/hilbert.hpp"

namespace quadblockade {

enum class ParameterId { delta_c, omega_m, g0, omega_drive, gamma_c, gamma_m, n_th };

/// Snake-case name, e.g. "gamma_c". Used as the `param.` column suffix.
std::string_view parameter_name(ParameterId id);
/// Accepts snake-case and dashed spellings. Throws ParameterError otherwise.
ParameterId parse_parameter(std::string_view name);
double& parameter_ref(ModelParams& params, ParameterId id);
double parameter_value(const ModelParams& params, ParameterId id);

struct Axis {
  ParameterId parameter = ParameterId::delta_c;
  std::vector<double> values;
};

/// n evenly spaced values from `first` to `last` inclusive.
std::vector<double> linspace(double first, double last, int n);

enum class DriveKind { fixed, spr, tpr };

/// fixed: delta_c as given. spr:l puts the drive on the l-th sideband of the
/// one-photon manifold, tpr:l on the l-th sideband of the two-photon manifold.
struct DriveCondition {
  DriveKind kind = DriveKind::fixed;
  int sideband = 0;

  /// "fixed", "spr:2", "tpr:0". Throws ParameterError on anything else.
  static DriveCondition parse(std::string_view text);
  std::string label() const;
  bool operator==(const DriveCondition&) const = default;
};

/// Detuning imposed by the drive condition; params.delta_c for `fixed`.
double driven_detuning(const ModelParams& params, const DriveCondition& drive);

struct SolverSet {
  bool analytic = true;
  bool numeric = true;
};

struct TruncationControl {
  int n_photon_max = 4;
  int phonon_seed = 25;
  double rel_tolerance = 1e-4;
  int phonon_cap = 100;
};

struct SweepSpec {
  ModelParams base;
  Axis axis1;
  std::optional<Axis> axis2;
  DriveCondition drive;
  SolverSet solvers;
  TruncationControl truncation;

  /// Throws ParameterError for empty or non-finite axes and bad truncation.
  void validate() const;
  std::size_t size() const noexcept;
};

enum class PointStatus { ok, skipped, unconverged, failed };
std::string_view status_name(PointStatus status);

struct SweepRecord {
  std::size_t i1 = 0;
  std::size_t i2 = 0;
  ModelParams params;  // fully resolved, delta_c included
  std::optional<double> g2_numeric;
  std::optional<double> g2_analytic;
  double p1 = 0.0;  // one-photon probability (analytic if requested, else from rho)
  double p2 = 0.0;
  double mean_photons = 0.0;  // numeric <a'a>, 0 when not solved
  int n_phonon_used = 0;
  int truncation_steps = 0;
  PointStatus status = PointStatus::ok;
  std::string message;
  double wall_seconds = 0.0;
};

struct SweepResult {
  SweepSpec spec;
  std::string version;
  unsigned threads = 1;
  std::vector<SweepRecord> records;  // axis2 index varies fastest

  std::size_t count(PointStatus status) const noexcept;
  /// Fraction of records that are neither ok nor skipped.
  double failure_fraction() const noexcept;
};

/// Evaluates one parameter point with the requested solvers. Numeric N_b
/// starts at the seed and doubles until g2 moves less than the relative
/// tolerance; reaching the cap yields an `unconverged` record that still
/// carries the last value. Unstable points become `skipped`. Errors are
/// stored in the record.
SweepRecord evaluate_point(const ModelParams& params, const SolverSet& solvers,
                           const TruncationControl& truncation);

/// Parallel over grid points; QUADBLOCKADE_THREADS caps the worker count.
SweepResult run_sweep(const SweepSpec& spec);

/// Worker count honoured by run_sweep().
unsigned sweep_thread_count();

struct ResonanceDetuning {
  std::string label;  // "D0", "P2", ...
  int sideband = 0;
  bool dip = true;        // D_l (one-photon) or P_l (two-photon)
  bool dominant = true;   // even sideband index
  double delta_c = 0.0;
};

/// D_l and P_l for l = 0..l_max, ordered D0, P0, D1, P1, ...
/// Throws ParameterError unless the s = 1, 2 manifolds are stable.
std::vector<ResonanceDetuning> resonance_detunings(const ModelParams& params, int l_max);

}  // namespace quadblockade
