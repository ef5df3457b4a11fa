#pragma once

#include <vector>

#include "quadblockade/hilbert.hpp"

namespace quadblockade {

/// Long-time few-photon amplitudes in the dressed basis |s>_a |m~(s)>_b.
///
/// The membrane starts in its ground state, so c0 is the unit vector e_0. The
/// common stationary phase exp(-i E_00 t) is dropped; it has unit modulus and
/// does not enter any probability.
struct AmplitudeSet {
  std::vector<double> c0;
  std::vector<Complex> c1;
  std::vector<Complex> c2;
  int n_phonon_max = 0;
};

struct AnalyticStatistics {
  double p1 = 0.0;             // sum_m |c1[m]|^2
  double p2 = 0.0;             // sum_m |c2[m]|^2
  double g2 = 0.0;             // 2 p2 / (p1 + 2 p2)^2
  double g2_weak_drive = 0.0;  // 2 p2 / p1^2
};

inline constexpr int kDefaultAnalyticPhononMax = 24;
inline constexpr double kAnalyticRelTolerance = 1e-8;

/// Amplitudes with every phonon sum cut at n_phonon_max; no refinement.
AmplitudeSet amplitudes_at_truncation(const ModelParams& params, int n_phonon_max);

/// Amplitudes with automatic truncation control: the cut is doubled until g2
/// changes by less than kAnalyticRelTolerance (relative), up to four times the
/// requested cut. Throws ConvergenceError carrying the last two g2 values when
/// the cap is reached. Logs one warning per process if omega_drive / gamma_c
/// exceeds 0.3.
AmplitudeSet longtime_amplitudes(const ModelParams& params,
                                 int n_phonon_max = kDefaultAnalyticPhononMax);

/// Throws UndefinedCorrelationError when p1 + 2 p2 == 0.
AnalyticStatistics photon_statistics(const AmplitudeSet& amps);

double g2_analytic(const AmplitudeSet& amps);

/// Three-level (small g0) estimate
///   [4 (delta_c + d1)^2 + gamma_c^2] / [(2 delta_c + d2)^2 + gamma_c^2].
/// Only meaningful for g0 << omega_m; no guard is applied.
double g2_small_g0(double delta_c, const ModelParams& params);

/// Small-g0 estimate at delta_c = -d1 and delta_c = -d2/2. These are exact
/// reciprocals of each other.
double g2_spr(const ModelParams& params);
double g2_tpr(const ModelParams& params);

}  // namespace quadblockade
