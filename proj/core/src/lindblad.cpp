#include "quadblockade/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/UmfPackSupport>
#include <spdlog/spdlog.h>

#include "quadblockade/errors.hpp"
#include "steady_state_solver.hpp"

namespace quadblockade {

namespace {

// conj(c) (x) c - (I (x) c'c + (c'c)^T (x) I) / 2
SparseOperator dissipator(const SparseOperator& jump, const SparseOperator& id) {
  const SparseOperator cdc = jump.adjoint() * jump;
  const SparseOperator cdc_t = cdc.transpose();
  const SparseOperator jump_conj = jump.conjugate();
  SparseOperator out = tensor(jump_conj, jump);
  out -= 0.5 * (tensor(id, cdc) + tensor(cdc_t, id));
  return out;
}

}  // namespace

Liouvillian build_liouvillian(const ModelParams& params, const FockSpace& space) {
  const SparseOperator h = build_hamiltonian(params, space);
  const auto ops = ModeOperators::build(space);
  const SparseOperator id = identity(space.dim());
  const SparseOperator h_t = h.transpose();

  SparseOperator l = Complex(0.0, -1.0) * SparseOperator(tensor(id, h) - tensor(h_t, id));
  if (params.gamma_c > 0.0) l += dissipator(std::sqrt(params.gamma_c) * ops.a, id);
  if (params.gamma_m > 0.0) {
    l += dissipator(std::sqrt(params.gamma_m * (params.n_th + 1.0)) * ops.b, id);
    if (params.n_th > 0.0) {
      const SparseOperator bd = ops.b.adjoint();
      l += dissipator(std::sqrt(params.gamma_m * params.n_th) * bd, id);
    }
  }
  l.prune(Complex(0.0, 0.0));
  l.makeCompressed();
  return Liouvillian(std::move(l), space, params);
}

Eigen::VectorXcd vectorize(const DenseOperator& rho) {
  return Eigen::Map<const Eigen::VectorXcd>(rho.data(), rho.size());
}

DenseOperator unvectorize(const Eigen::VectorXcd& v) {
  const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
  if (d * d != v.size()) throw DimensionError("vector length is not a perfect square");
  return Eigen::Map<const DenseOperator>(v.data(), d, d);
}

bool DensityDiagnostics::structurally_valid() const noexcept {
  return hermiticity_error <= kHermiticityTolerance && trace_error <= kTraceTolerance &&
         min_eigenvalue > -kPositivityTolerance;
}

bool DensityDiagnostics::boundary_ok() const noexcept {
  return photon_boundary < kBoundaryTolerance && phonon_boundary < kBoundaryTolerance;
}

std::string DensityDiagnostics::describe() const {
  std::ostringstream os;
  os << "hermiticity_error=" << hermiticity_error << " trace_error=" << trace_error
     << " min_eigenvalue=" << min_eigenvalue << " purity=" << purity
     << " photon_boundary=" << photon_boundary << " phonon_boundary=" << phonon_boundary;
  return os.str();
}

DensityDiagnostics diagnose(const DensityMatrix& state) {
  const auto& rho = state.rho;
  const auto& space = state.space;
  DensityDiagnostics diag;
  diag.hermiticity_error = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  diag.trace_error = std::abs(rho.trace() - Complex(1.0, 0.0));

  const DenseOperator herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<DenseOperator> eig(herm, Eigen::EigenvaluesOnly);
  diag.min_eigenvalue = eig.eigenvalues().minCoeff();
  diag.purity = (rho * rho).trace().real();

  const int nb = space.phonon_levels();
  for (int s = 0; s < space.photon_levels(); ++s) {
    for (int m = 0; m < nb; ++m) {
      const double p = rho(space.index(s, m), space.index(s, m)).real();
      if (s == space.n_photon_max) diag.photon_boundary += p;
      if (m == space.n_phonon_max) diag.phonon_boundary += p;
    }
  }
  return diag;
}

EigenProbe nearest_eigenvalue(const Liouvillian& liouv, Complex shift, int max_iterations) {
  const auto layout = detail::even_parity_sector(liouv.space());
  SparseOperator shifted = detail::sector_generator(liouv.matrix(), layout);
  SparseOperator id(shifted.rows(), shifted.cols());
  id.setIdentity();
  shifted -= shift * id;

  EigenProbe probe;
  Eigen::UmfPackLU<SparseOperator> lu;
  lu.compute(shifted);
  if (lu.info() != Eigen::Success) {
    probe.eigenvalue = shift;  // shift is (numerically) an eigenvalue
    probe.converged = true;
    return probe;
  }
  const SparseOperator generator = detail::sector_generator(liouv.matrix(), layout);
  Eigen::VectorXcd x = Eigen::VectorXcd::Ones(shifted.rows()).normalized();
  Complex previous(std::numeric_limits<double>::infinity(), 0.0);
  for (int it = 1; it <= max_iterations; ++it) {
    x = lu.solve(x);
    x.normalize();
    const Complex rayleigh = x.dot(generator * x);
    probe.eigenvalue = rayleigh;
    probe.iterations = it;
    if (std::abs(rayleigh - previous) <= 1e-12 * (1.0 + std::abs(rayleigh))) {
      probe.converged = true;
      break;
    }
    previous = rayleigh;
  }
  return probe;
}

namespace {

const char* method_name(SteadyStateMethod m) {
  switch (m) {
    case SteadyStateMethod::automatic: return "automatic";
    case SteadyStateMethod::direct: return "direct";
    case SteadyStateMethod::krylov: return "krylov";
  }
  return "?";
}

SteadyStateReport solve_at_truncation(const Liouvillian& liouv, const SteadyStateOptions& options) {
  const auto& params = liouv.params();
  if (params.gamma_c == 0.0 && params.gamma_m == 0.0) {
    throw DegenerateSteadyStateError(
        "no dissipation (gamma_c = gamma_m = 0): the generator is a pure commutator and its "
        "null space is degenerate");
  }
  if (params.gamma_c == 0.0 && params.omega_drive == 0.0) {
    throw DegenerateSteadyStateError(
        "lossless undriven cavity (gamma_c = omega_drive = 0): photon number is conserved and every "
        "photon-number sector has its own steady state");
  }

  const auto layout = detail::even_parity_sector(liouv.space());
  const SparseOperator system = detail::constrained_system(liouv.matrix(), layout);
  const Eigen::VectorXcd rhs = detail::constraint_rhs(layout);

  SteadyStateReport report;
  std::optional<Eigen::VectorXcd> solution;

  auto residual_of = [&](const Eigen::VectorXcd& sector_vec) {
    return (liouv.matrix() * detail::expand(sector_vec, layout)).cwiseAbs().maxCoeff();
  };

  if (options.method != SteadyStateMethod::direct) {
    auto krylov = detail::solve_krylov(system, rhs, layout, options.krylov_tolerance,
                                       options.krylov_max_iterations);
    if (krylov && krylov->converged && residual_of(krylov->solution) < kSteadyStateResidualTolerance) {
      report.krylov_iterations = krylov->iterations;
      report.method_used = SteadyStateMethod::krylov;
      solution = std::move(krylov->solution);
    } else if (options.method == SteadyStateMethod::krylov) {
      throw NumericError("preconditioned GMRES did not reach the steady-state residual tolerance");
    } else {
      spdlog::debug("GMRES steady state failed ({}), falling back to sparse LU",
                    krylov ? "no convergence" : "singular preconditioner block");
    }
  }

  if (!solution) {
    solution = detail::solve_direct(system, rhs);
    report.method_used = SteadyStateMethod::direct;
    if (!solution) {
      const auto probe = nearest_eigenvalue(liouv, Complex(-1e-9, 0.0));
      std::ostringstream os;
      os << "trace-constrained steady-state system is singular (eigenvalue nearest 0: "
         << probe.eigenvalue << ")";
      throw DegenerateSteadyStateError(os.str());
    }
  }

  const Eigen::VectorXcd full = detail::expand(*solution, layout);
  report.residual = (liouv.matrix() * full).cwiseAbs().maxCoeff();
  report.state = DensityMatrix{unvectorize(full), liouv.space()};
  report.diagnostics = diagnose(report.state);
  spdlog::debug("steady state [{}] n_phonon_max={} residual={:.2e} iterations={}",
                method_name(report.method_used), liouv.space().n_phonon_max, report.residual,
                report.krylov_iterations);
  return report;
}

}  // namespace

SteadyStateReport solve_steady_state(const Liouvillian& liouv, const SteadyStateOptions& options) {
  SteadyStateReport report = solve_at_truncation(liouv, options);

  if (!report.diagnostics.boundary_ok() && options.retry_truncation) {
    const FockSpace wider = liouv.space().with_phonon_max(liouv.space().n_phonon_max + 10);
    spdlog::info("boundary occupation too large ({}); re-solving with n_phonon_max={}",
                 report.diagnostics.describe(), wider.n_phonon_max);
    report = solve_at_truncation(build_liouvillian(liouv.params(), wider), options);
    report.truncation_retried = true;
  }

  if (report.residual > kSteadyStateResidualTolerance) {
    throw DegenerateSteadyStateError("steady-state residual " + std::to_string(report.residual) +
                                     " exceeds tolerance; the null space is ill-conditioned");
  }
  if (report.diagnostics.hermiticity_error > DensityDiagnostics::kHermiticityTolerance ||
      report.diagnostics.trace_error > DensityDiagnostics::kTraceTolerance) {
    throw DegenerateSteadyStateError("null space is not one-dimensional; the solution is not a density matrix: " +
                                     report.diagnostics.describe());
  }
  if (!report.diagnostics.valid()) {
    throw TruncationError("steady state violates density-matrix invariants: " +
                          report.diagnostics.describe());
  }
  return report;
}

DensityMatrix steady_state(const Liouvillian& liouv) { return solve_steady_state(liouv).state; }

PhotonMoments photon_moments(const DensityMatrix& state) {
  const auto& space = state.space;
  if (state.rho.rows() != space.dim() || state.rho.cols() != space.dim()) {
    throw DimensionError("density matrix does not match its Fock space");
  }
  Complex n1(0.0, 0.0);
  Complex n2(0.0, 0.0);
  Complex nb(0.0, 0.0);
  for (int s = 0; s < space.photon_levels(); ++s) {
    for (int m = 0; m < space.phonon_levels(); ++m) {
      const Complex p = state.rho(space.index(s, m), space.index(s, m));
      n1 += static_cast<double>(s) * p;
      n2 += static_cast<double>(s) * (s - 1) * p;
      nb += static_cast<double>(m) * p;
    }
  }
  constexpr double kImagTolerance = 1e-10;
  if (std::abs(n1.imag()) > kImagTolerance || std::abs(n2.imag()) > kImagTolerance ||
      std::abs(nb.imag()) > kImagTolerance) {
    throw NumericError("photon moment carries an imaginary residue above 1e-10");
  }
  return {n1.real(), n2.real(), nb.real()};
}

double g2_numeric(const DensityMatrix& state, const FockSpace& space) {
  if (!(state.space == space)) throw DimensionError("g2_numeric: state belongs to a different Fock space");
  const auto moments = photon_moments(state);
  constexpr double kMinPhotons = 1e-14;
  if (moments.mean_photons <= kMinPhotons) {
    throw UndefinedCorrelationError("g2(0) undefined: <a'a> = " + std::to_string(moments.mean_photons));
  }
  return moments.pair_moment / (moments.mean_photons * moments.mean_photons);
}

DenseOperator reduced_cavity_state(const DensityMatrix& state) {
  const auto& space = state.space;
  const int na = space.photon_levels();
  DenseOperator out = DenseOperator::Zero(na, na);
  for (int s = 0; s < na; ++s) {
    for (int sp = 0; sp < na; ++sp) {
      for (int m = 0; m < space.phonon_levels(); ++m) {
        out(s, sp) += state.rho(space.index(s, m), space.index(sp, m));
      }
    }
  }
  return out;
}

DenseOperator reduced_phonon_state(const DensityMatrix& state) {
  const auto& space = state.space;
  const int nb = space.phonon_levels();
  DenseOperator out = DenseOperator::Zero(nb, nb);
  for (int m = 0; m < nb; ++m) {
    for (int mp = 0; mp < nb; ++mp) {
      for (int s = 0; s < space.photon_levels(); ++s) {
        out(m, mp) += state.rho(space.index(s, m), space.index(s, mp));
      }
    }
  }
  return out;
}

}  // namespace quadblockade
