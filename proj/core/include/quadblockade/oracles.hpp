#pragma once

#include <functional>
#include <string>
#include <vector>

#include "quadblockade/hilbert.hpp"
#include "quadblockade/lindblad.hpp"

namespace quadblockade {

/// Outcome of comparing a production routine against a brute-force reference.
struct OracleReport {
  double max_abs_error = 0.0;
  int comparison_count = 0;
  std::string context;
  double threshold = 0.0;

  bool passed() const noexcept { return max_abs_error < threshold; }
};

/// Exponentiates xi (b^2 - b'^2) / 2 densely at n_trunc levels and compares
/// the leading n_compare x n_compare block with squeeze_matrix_element().
/// Requires n_trunc >= 2 n_compare + 20.
OracleReport squeeze_oracle(double xi, int n_compare, int n_trunc, double threshold = 1e-8);

/// Same comparison against an arbitrary element routine (for mutation tests).
using SqueezeElementFn = std::function<double(int, int, double)>;
OracleReport squeeze_oracle(double xi, int n_compare, int n_trunc, double threshold,
                            const SqueezeElementFn& candidate);

/// Integrates the master equation from |0><0| (x) |0><0| up to t_final with an
/// adaptive Dormand-Prince 5(4) pair, capping the step at dt_max. The
/// right-hand side is assembled in matrix form, independently of the
/// vectorized generator. A step is accepted only if the cumulative trace drift
/// stays below 1e-10 per unit time and rho stays Hermitian to 1e-10; the step
/// is halved otherwise. Throws StiffnessError if the step underflows.
DensityMatrix evolve_to_steady(const ModelParams& params, const FockSpace& space, double t_final,
                               double dt_max);

/// Half the trace norm of rho - sigma.
double trace_distance(const DenseOperator& rho, const DenseOperator& sigma);

/// Small configuration on which the time-domain oracle is affordable.
struct SmokeCase {
  std::string name;
  ModelParams params;
  FockSpace space;
  double t_final = 0.0;
  double dt_max = 0.5;
};

/// Dark vacuum, linear (g0 = 0) coherent drive, and a strong-coupling point
/// driven on the single-photon resonance. All with gamma_m = 0.05 so that
/// t_final = 20 / gamma_m stays short.
std::vector<SmokeCase> solver_smoke_set();

/// Trace distance between the direct steady state (no truncation retry) and
/// the time-evolved state of one smoke case.
OracleReport cross_validate_steady_state(const SmokeCase& smoke, double threshold = 1e-6);

}  // namespace quadblockade
