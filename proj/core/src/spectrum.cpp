#include "quadblockade/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "quadblockade/errors.hpp"

namespace quadblockade {

DressedLevel dressed_level(const ModelParams& params, int s, int m) {
  if (s < 0 || m < 0) throw ParameterError("dressed_level needs s, m >= 0");
  const double ratio = 1.0 + 4.0 * s * params.g0 / params.omega_m;
  if (!(params.omega_m > 0.0) || !(ratio > 0.0)) {
    throw ParameterError("membrane unstable at photon number s=" + std::to_string(s), s);
  }
  DressedLevel level;
  level.s = s;
  level.m = m;
  level.omega_s = params.omega_m * std::sqrt(ratio);
  level.delta_s = 0.5 * (level.omega_s - params.omega_m);
  level.eta_s = 0.25 * std::log(ratio);
  level.energy = s * params.delta_c + m * level.omega_s + level.delta_s;
  return level;
}

namespace {

struct Term {
  double log_magnitude;
  double sign;
};

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

}  // namespace

SqueezeElement evaluate_squeeze_element(int m, int n, double xi) {
  if (m < 0 || n < 0) throw ParameterError("squeeze matrix indices must be nonnegative");
  if (!std::isfinite(xi)) throw ParameterError("squeeze parameter must be finite");

  SqueezeElement out;
  out.low_confidence = m > kSqueezeValidatedIndex || n > kSqueezeValidatedIndex ||
                       std::abs(xi) > kSqueezeValidatedXi;

  if ((m + n) % 2 != 0) return out;  // parity selection: exactly zero
  if (xi == 0.0) {
    out.value = (m == n) ? 1.0 : 0.0;
    return out;
  }

  const double log_cosh = std::log(std::cosh(xi));
  const double half_tanh = 0.5 * std::tanh(xi);
  const double log_half_tanh = std::log(std::abs(half_tanh));
  const double tanh_sign = half_tanh < 0.0 ? -1.0 : 1.0;
  const double log_prefactor =
      0.5 * (std::lgamma(m + 1.0) + std::lgamma(n + 1.0)) - (n + 0.5) * log_cosh;

  // l' = l + (m - n) / 2 with 0 <= l <= n/2 and 0 <= l' <= m/2.
  const int shift = (m - n) / 2;
  const int l_lo = std::max(0, -shift);
  const int l_hi = std::min(n / 2, m / 2 - shift);

  std::vector<Term> terms;
  terms.reserve(static_cast<std::size_t>(std::max(0, l_hi - l_lo + 1)));
  for (int l = l_lo; l <= l_hi; ++l) {
    const int lp = l + shift;
    const double log_mag = log_prefactor - std::lgamma(l + 1.0) - std::lgamma(lp + 1.0) +
                           (l + lp) * log_half_tanh - std::lgamma(n - 2.0 * l + 1.0) +
                           2.0 * l * log_cosh;
    double sign = (lp % 2 == 0) ? 1.0 : -1.0;
    if (tanh_sign < 0.0 && (l + lp) % 2 != 0) sign = -sign;
    terms.push_back({log_mag, sign});
  }

  constexpr double kMaxLog = 709.0;  // just below log(DBL_MAX)
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.log_magnitude > b.log_magnitude; });
  if (!terms.empty() && terms.front().log_magnitude > kMaxLog) {
    throw NumericRangeError("squeeze element <" + std::to_string(m) + "|S(" + std::to_string(xi) +
                            ")|" + std::to_string(n) + "> overflows double precision");
  }

  CompensatedSum sum;
  for (const auto& t : terms) sum.add(t.sign * std::exp(t.log_magnitude));
  out.value = sum.value();
  if (!std::isfinite(out.value)) {
    throw NumericRangeError("squeeze element evaluation produced a non-finite value");
  }
  return out;
}

double squeeze_matrix_element(int m, int n, double xi) {
  return evaluate_squeeze_element(m, n, xi).value;
}

Eigen::MatrixXd squeeze_matrix(double xi, int n_levels) {
  Eigen::MatrixXd table = Eigen::MatrixXd::Zero(n_levels, n_levels);
  for (int m = 0; m < n_levels; ++m) {
    for (int n = m % 2; n < n_levels; n += 2) table(m, n) = squeeze_matrix_element(m, n, xi);
  }
  return table;
}

double overlap(const ModelParams& params, int s, int m, int s_prime, int n) {
  const double eta = dressed_level(params, s, 0).eta_s;
  const double eta_prime = dressed_level(params, s_prime, 0).eta_s;
  return squeeze_matrix_element(m, n, eta_prime - eta);
}

}  // namespace quadblockade
