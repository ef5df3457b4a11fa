#include "quadblockade/hilbert.hpp"

#include <cmath>
#include <string>
#include <vector>

#include <spdlog/spdlog.h>
#include <unsupported/Eigen/KroneckerProduct>

#include "quadblockade/errors.hpp"

namespace quadblockade {

void FockSpace::validate() const {
  if (photon_levels() < 3) {
    throw DimensionError("photon truncation must keep at least 3 levels (0, 1, 2 photons); got n_photon_max=" +
                         std::to_string(n_photon_max));
  }
  if (phonon_levels() < 2) {
    throw DimensionError("phonon truncation must keep at least 2 levels; got n_phonon_max=" +
                         std::to_string(n_phonon_max));
  }
}

void ModelParams::validate() const {
  const double values[] = {delta_c, omega_m, g0, omega_drive, gamma_c, gamma_m, n_th};
  for (double v : values) {
    if (!std::isfinite(v)) throw ParameterError("model parameters must be finite");
  }
  if (omega_m <= 0.0) throw ParameterError("omega_m must be positive");
  if (omega_drive < 0.0) throw ParameterError("omega_drive must be nonnegative");
  if (gamma_c < 0.0) throw ParameterError("gamma_c must be nonnegative");
  if (gamma_m < 0.0) throw ParameterError("gamma_m must be nonnegative");
  if (n_th < 0.0) throw ParameterError("n_th must be nonnegative");
}

bool ModelParams::is_stable(int s) const noexcept {
  return omega_m + 4.0 * s * g0 > 0.0;
}

void ModelParams::check_stability(int n_photon_max) const {
  for (int s = 0; s <= n_photon_max; ++s) {
    if (!is_stable(s)) {
      throw ParameterError("membrane unstable: omega_m + 4*s*g0 = " +
                               std::to_string(omega_m + 4.0 * s * g0) + " <= 0 at photon number s=" +
                               std::to_string(s),
                           s);
    }
  }
}

SparseOperator annihilator(int n_levels) {
  if (n_levels < 2) {
    throw DimensionError("annihilator needs at least 2 levels, got " + std::to_string(n_levels));
  }
  SparseOperator a(n_levels, n_levels);
  a.reserve(Eigen::VectorXi::Ones(n_levels));
  for (int n = 1; n < n_levels; ++n) a.insert(n - 1, n) = std::sqrt(static_cast<double>(n));
  a.makeCompressed();
  return a;
}

SparseOperator identity(int n) {
  SparseOperator id(n, n);
  id.setIdentity();
  return id;
}

SparseOperator tensor(const SparseOperator& op_a, const SparseOperator& op_b) {
  SparseOperator out = Eigen::kroneckerProduct(op_a, op_b);
  out.makeCompressed();
  return out;
}

DenseOperator to_dense(const SparseOperator& op) {
  spdlog::debug("densifying {}x{} operator ({} nonzeros)", op.rows(), op.cols(), op.nonZeros());
  return DenseOperator(op);
}

ModeOperators ModeOperators::build(const FockSpace& space) {
  const int na = space.photon_levels();
  const int nb = space.phonon_levels();
  return {tensor(annihilator(na), identity(nb)), tensor(identity(na), annihilator(nb))};
}

SparseOperator build_hamiltonian(const ModelParams& params, const FockSpace& space) {
  space.validate();
  params.validate();
  params.check_stability(space.n_photon_max);

  const auto ops = ModeOperators::build(space);
  const SparseOperator ad = ops.a.adjoint();
  const SparseOperator bd = ops.b.adjoint();
  const SparseOperator n_photon = ad * ops.a;
  const SparseOperator n_phonon = bd * ops.b;
  const SparseOperator x = ops.b + bd;
  const SparseOperator x2 = x * x;

  SparseOperator h = params.delta_c * n_photon + params.omega_m * n_phonon +
                     params.g0 * SparseOperator(n_photon * x2) +
                     params.omega_drive * SparseOperator(ops.a + ad);
  h.prune(Complex(0.0, 0.0));
  h.makeCompressed();
  return h;
}

}  // namespace quadblockade
