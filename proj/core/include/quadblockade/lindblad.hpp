#pragma once

#include <string>

#include "quadblockade/hilbert.hpp"

namespace quadblockade {

/// Vectorized master-equation generator.
///
/// Convention: column-major vectorization, vec(rho)[i + D j] = rho(i, j), so
/// vec(A rho B) = (B^T (x) A) vec(rho). With that convention
///   L = -i (I (x) H - H^T (x) I) + sum_k [ conj(c_k) (x) c_k
///                                          - (I (x) c_k'c_k + (c_k'c_k)^T (x) I) / 2 ]
/// with c_1 = sqrt(gamma_c) a, c_2 = sqrt(gamma_m (n_th + 1)) b and
/// c_3 = sqrt(gamma_m n_th) b'.
class Liouvillian {
 public:
  Liouvillian(SparseOperator matrix, FockSpace space, ModelParams params)
      : matrix_(std::move(matrix)), space_(space), params_(params) {}

  const SparseOperator& matrix() const noexcept { return matrix_; }
  const FockSpace& space() const noexcept { return space_; }
  const ModelParams& params() const noexcept { return params_; }
  int dim() const noexcept { return static_cast<int>(matrix_.rows()); }

 private:
  SparseOperator matrix_;
  FockSpace space_;
  ModelParams params_;
};

Liouvillian build_liouvillian(const ModelParams& params, const FockSpace& space);

Eigen::VectorXcd vectorize(const DenseOperator& rho);
DenseOperator unvectorize(const Eigen::VectorXcd& v);

struct DensityMatrix {
  DenseOperator rho;
  FockSpace space;
};

/// Invariant figures for a candidate steady state.
struct DensityDiagnostics {
  double hermiticity_error = 0.0;  // max |rho - rho'|
  double trace_error = 0.0;        // |tr rho - 1|
  double min_eigenvalue = 0.0;     // of the Hermitian part
  double purity = 0.0;             // tr rho^2
  double photon_boundary = 0.0;    // population with s = n_photon_max
  double phonon_boundary = 0.0;    // population with m = n_phonon_max

  static constexpr double kHermiticityTolerance = 1e-10;
  static constexpr double kTraceTolerance = 1e-10;
  static constexpr double kPositivityTolerance = 1e-8;
  static constexpr double kBoundaryTolerance = 1e-6;

  bool structurally_valid() const noexcept;  // hermiticity, trace, positivity
  bool boundary_ok() const noexcept;
  bool valid() const noexcept { return structurally_valid() && boundary_ok(); }
  std::string describe() const;
};

DensityDiagnostics diagnose(const DensityMatrix& state);

enum class SteadyStateMethod {
  automatic,  // preconditioned GMRES, falling back to sparse LU
  direct,     // sparse LU of the trace-constrained system
  krylov,     // preconditioned GMRES only
};

struct SteadyStateOptions {
  SteadyStateMethod method = SteadyStateMethod::automatic;
  bool retry_truncation = true;  // one re-solve at n_phonon_max + 10
  double krylov_tolerance = 1e-14;
  int krylov_max_iterations = 400;
};

struct SteadyStateReport {
  DensityMatrix state;
  DensityDiagnostics diagnostics;
  double residual = 0.0;  // ||L vec(rho)||_inf on the full generator
  SteadyStateMethod method_used = SteadyStateMethod::direct;
  int krylov_iterations = 0;
  bool truncation_retried = false;
};

inline constexpr double kSteadyStateResidualTolerance = 1e-10;

/// Solves L vec(rho) = 0 subject to tr rho = 1.
///
/// Only the sector with even (m - m') phonon parity is solved: both the
/// Hamiltonian and every jump operator preserve that parity difference, and
/// the trace lives entirely inside it, so a unique steady state has no
/// component outside. Throws DegenerateSteadyStateError when the null space
/// is known to be degenerate (no dissipation, or a lossless undriven cavity),
/// when the constrained system is singular, or when the solution is not
/// Hermitian with unit trace; throws TruncationError when positivity or
/// boundary occupation fail after the truncation retry.
SteadyStateReport solve_steady_state(const Liouvillian& liouv, const SteadyStateOptions& options = {});

/// solve_steady_state() with default options, returning only the state.
DensityMatrix steady_state(const Liouvillian& liouv);

/// Eigenvalue of the parity-sector generator nearest to `shift`, by shifted
/// inverse iteration. Used as a diagnostic when the constrained solve fails.
struct EigenProbe {
  Complex eigenvalue;
  int iterations = 0;
  bool converged = false;
};
EigenProbe nearest_eigenvalue(const Liouvillian& liouv, Complex shift, int max_iterations = 200);

struct PhotonMoments {
  double mean_photons = 0.0;    // <a'a>
  double pair_moment = 0.0;     // <a'a'aa>
  double mean_phonons = 0.0;    // <b'b>
};

/// Throws NumericError when a trace carries an imaginary residue above 1e-10.
PhotonMoments photon_moments(const DensityMatrix& state);

/// <a'a'aa> / <a'a>^2. Throws UndefinedCorrelationError when <a'a> <= 1e-14.
double g2_numeric(const DensityMatrix& state, const FockSpace& space);

/// Reduced states obtained by tracing out the other mode.
DenseOperator reduced_cavity_state(const DensityMatrix& state);
DenseOperator reduced_phonon_state(const DensityMatrix& state);

}  // namespace quadblockade
