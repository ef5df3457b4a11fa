#pragma once

#include <complex>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace quadblockade {

using Complex = std::complex<double>;

/// Complex operator on a truncated Fock space. Column-major sparse storage.
using SparseOperator = Eigen::SparseMatrix<Complex>;
using DenseOperator = Eigen::MatrixXcd;

/// Truncation of the cavity (photon) x membrane (phonon) tensor space.
///
/// Composite basis index is photon-major: k = s * phonon_levels() + m, so every
/// fixed-photon-number block is a contiguous run of phonon states.
struct FockSpace {
  int n_photon_max = 4;
  int n_phonon_max = 24;

  int photon_levels() const noexcept { return n_photon_max + 1; }
  int phonon_levels() const noexcept { return n_phonon_max + 1; }
  int dim() const noexcept { return photon_levels() * phonon_levels(); }
  int index(int s, int m) const noexcept { return s * phonon_levels() + m; }

  /// Throws DimensionError unless photon_levels() >= 3 and phonon_levels() >= 2.
  void validate() const;

  FockSpace with_phonon_max(int n) const noexcept { return {n_photon_max, n}; }

  friend bool operator==(const FockSpace&, const FockSpace&) = default;
};

/// Physical parameters in units of the bare mechanical frequency.
struct ModelParams {
  double delta_c = 0.0;      // cavity-drive detuning
  double omega_m = 1.0;      // mechanical frequency (unit scale)
  double g0 = 0.0;           // quadratic coupling
  double omega_drive = 0.0;  // drive amplitude
  double gamma_c = 0.1;      // cavity energy decay rate
  double gamma_m = 0.001;    // mechanical damping rate
  double n_th = 0.0;         // thermal phonon occupation of the mechanical bath

  /// Finite values, omega_m > 0, nonnegative rates and occupation.
  void validate() const;

  /// True when omega_m + 4 s g0 > 0.
  bool is_stable(int s) const noexcept;

  /// Throws ParameterError naming the smallest s <= n_photon_max that breaks
  /// omega_m + 4 s g0 > 0.
  void check_stability(int n_photon_max) const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Single-mode annihilation operator with <n-1|a|n> = sqrt(n).
SparseOperator annihilator(int n_levels);

SparseOperator identity(int n);

/// Kronecker product; the first operand owns the slow (outer) index.
SparseOperator tensor(const SparseOperator& op_a, const SparseOperator& op_b);

/// Explicit densification. Logged at debug level since it is the one place
/// where storage grows quadratically.
DenseOperator to_dense(const SparseOperator& op);

/// Cavity and membrane ladder operators lifted to the composite space.
struct ModeOperators {
  SparseOperator a;
  SparseOperator b;

  static ModeOperators build(const FockSpace& space);
};

/// Rotating-frame system Hamiltonian
///   delta_c a'a + omega_m b'b + g0 a'a (b' + b)^2 + omega_drive (a' + a),
/// with (b' + b)^2 formed by squaring the truncated position operator.
SparseOperator build_hamiltonian(const ModelParams& params, const FockSpace& space);

}  // namespace quadblockade
