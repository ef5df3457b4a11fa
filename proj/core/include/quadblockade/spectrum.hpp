#pragma once

#include <Eigen/Dense>

#include "quadblockade/hilbert.hpp"

namespace quadblockade {

/// Eigenlevel |s>_a |m~(s)>_b of the undriven Hamiltonian.
struct DressedLevel {
  int s = 0;
  int m = 0;
  double energy = 0.0;   // s delta_c + m omega_s + delta_s
  double omega_s = 0.0;  // omega_m sqrt(1 + 4 s g0 / omega_m)
  double delta_s = 0.0;  // (omega_s - omega_m) / 2
  double eta_s = 0.0;    // ln(1 + 4 s g0 / omega_m) / 4
};

DressedLevel dressed_level(const ModelParams& params, int s, int m);

/// Indices and squeeze parameters inside this box are cross-checked against a
/// matrix exponential; outside it values are computed but flagged.
inline constexpr int kSqueezeValidatedIndex = 30;
inline constexpr double kSqueezeValidatedXi = 1.5;

struct SqueezeElement {
  double value = 0.0;
  bool low_confidence = false;
};

/// <m| exp[xi (b^2 - b'^2) / 2] |n> from the closed-form finite double sum.
///
/// The sum collapses to a single index because the Kronecker delta pins
/// l' = l + (m - n)/2. Terms are built from log-gamma magnitudes and added
/// in descending magnitude with compensated summation since the alternating
/// series cancels badly for large indices. Throws NumericRangeError if a term
/// overflows double even after stabilization.
SqueezeElement evaluate_squeeze_element(int m, int n, double xi);

/// Value-only shorthand for evaluate_squeeze_element().
double squeeze_matrix_element(int m, int n, double xi);

/// Dense table T(m, n) = <m|S(xi)|n> for 0 <= m, n < n_levels.
Eigen::MatrixXd squeeze_matrix(double xi, int n_levels);

/// <m~(s)|n~(s')> = <m| S(eta_{s'} - eta_s) |n>.
double overlap(const ModelParams& params, int s, int m, int s_prime, int n);

}  // namespace quadblockade
