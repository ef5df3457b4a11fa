#include "quadblockade/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

#include <spdlog/spdlog.h>

#include "quadblockade/errors.hpp"
#include "quadblockade/spectrum.hpp"

namespace quadblockade {

namespace {

void warn_if_strong_drive(const ModelParams& params) {
  static std::once_flag warned;
  if (params.gamma_c > 0.0 && params.omega_drive / params.gamma_c > 0.3) {
    std::call_once(warned, [&] {
      spdlog::warn("omega_drive/gamma_c = {:.3g} > 0.3: few-photon amplitudes leave their weak-drive regime",
                   params.omega_drive / params.gamma_c);
    });
  }
}

double relative_change(double previous, double current) {
  const double scale = std::max(std::abs(previous), std::abs(current));
  return scale == 0.0 ? 0.0 : std::abs(current - previous) / scale;
}

}  // namespace

AmplitudeSet amplitudes_at_truncation(const ModelParams& params, int n_phonon_max) {
  params.validate();
  if (n_phonon_max < 1) throw DimensionError("analytic truncation needs n_phonon_max >= 1");
  params.check_stability(2);

  const int levels = n_phonon_max + 1;
  const DressedLevel one = dressed_level(params, 1, 0);
  const DressedLevel two = dressed_level(params, 2, 0);
  const double half_gamma = 0.5 * params.gamma_c;
  const double omega = params.omega_drive;

  // <n~(1)|0> = <n|S(-eta1)|0>;  <m~(2)|n~(1)> = <m|S(eta1 - eta2)|n>.
  Eigen::VectorXd from_vacuum(levels);
  for (int n = 0; n < levels; ++n) from_vacuum(n) = squeeze_matrix_element(n, 0, -one.eta_s);
  const Eigen::MatrixXd one_to_two = squeeze_matrix(one.eta_s - two.eta_s, levels);

  // Resolvents of the one- and two-photon manifolds relative to E_00 = 0.
  Eigen::VectorXcd one_photon(levels);
  Eigen::VectorXcd two_photon(levels);
  for (int m = 0; m < levels; ++m) {
    one_photon(m) = 1.0 / Complex(one.energy + m * one.omega_s, -half_gamma);
    two_photon(m) = 1.0 / Complex(two.energy + m * two.omega_s, -params.gamma_c);
  }

  AmplitudeSet amps;
  amps.n_phonon_max = n_phonon_max;
  amps.c0.assign(static_cast<std::size_t>(levels), 0.0);
  amps.c0[0] = 1.0;
  amps.c1.resize(static_cast<std::size_t>(levels));
  amps.c2.resize(static_cast<std::size_t>(levels));

  const Eigen::VectorXcd intermediate = from_vacuum.cast<Complex>().cwiseProduct(one_photon);
  const Eigen::VectorXcd two_photon_sum = one_to_two.cast<Complex>() * intermediate;
  for (int m = 0; m < levels; ++m) {
    amps.c1[static_cast<std::size_t>(m)] = -omega * intermediate(m);
    amps.c2[static_cast<std::size_t>(m)] =
        std::sqrt(2.0) * omega * omega * two_photon(m) * two_photon_sum(m);
  }
  return amps;
}

AmplitudeSet longtime_amplitudes(const ModelParams& params, int n_phonon_max) {
  warn_if_strong_drive(params);
  AmplitudeSet coarse = amplitudes_at_truncation(params, n_phonon_max);
  if (params.omega_drive == 0.0) return coarse;

  double previous = g2_analytic(coarse);
  for (int factor : {2, 4}) {
    AmplitudeSet refined = amplitudes_at_truncation(params, factor * n_phonon_max);
    const double g2 = g2_analytic(refined);
    if (relative_change(previous, g2) < kAnalyticRelTolerance) return refined;
    if (factor == 4) {
      throw ConvergenceError("analytic amplitudes did not converge up to n_phonon_max=" +
                                 std::to_string(factor * n_phonon_max),
                             previous, g2);
    }
    previous = g2;
  }
  return coarse;  // unreachable
}

AnalyticStatistics photon_statistics(const AmplitudeSet& amps) {
  AnalyticStatistics stats;
  for (const auto& c : amps.c1) stats.p1 += std::norm(c);
  for (const auto& c : amps.c2) stats.p2 += std::norm(c);
  const double photons = stats.p1 + 2.0 * stats.p2;
  if (!(photons > 0.0)) {
    throw UndefinedCorrelationError("g2(0) undefined: no photons in the few-photon state");
  }
  stats.g2 = 2.0 * stats.p2 / (photons * photons);
  stats.g2_weak_drive = 2.0 * stats.p2 / (stats.p1 * stats.p1);
  return stats;
}

double g2_analytic(const AmplitudeSet& amps) { return photon_statistics(amps).g2; }

double g2_small_g0(double delta_c, const ModelParams& params) {
  const double d1 = dressed_level(params, 1, 0).delta_s;
  const double d2 = dressed_level(params, 2, 0).delta_s;
  const double g2c = params.gamma_c * params.gamma_c;
  const double num = 4.0 * (delta_c + d1) * (delta_c + d1) + g2c;
  const double den = (2.0 * delta_c + d2) * (2.0 * delta_c + d2) + g2c;
  return num / den;
}

namespace {

double anharmonicity_squared(const ModelParams& params) {
  const double a = dressed_level(params, 2, 0).delta_s - 2.0 * dressed_level(params, 1, 0).delta_s;
  return a * a;
}

}  // namespace

double g2_spr(const ModelParams& params) {
  const double g2c = params.gamma_c * params.gamma_c;
  return g2c / (anharmonicity_squared(params) + g2c);
}

double g2_tpr(const ModelParams& params) {
  const double g2c = params.gamma_c * params.gamma_c;
  return (anharmonicity_squared(params) + g2c) / g2c;
}

}  // namespace quadblockade
