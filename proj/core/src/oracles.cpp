#include "quadblockade/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <boost/numeric/odeint.hpp>
#include <spdlog/spdlog.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "quadblockade/errors.hpp"
#include "quadblockade/spectrum.hpp"

namespace quadblockade {

OracleReport squeeze_oracle(double xi, int n_compare, int n_trunc, double threshold) {
  return squeeze_oracle(xi, n_compare, n_trunc, threshold, squeeze_matrix_element);
}

OracleReport squeeze_oracle(double xi, int n_compare, int n_trunc, double threshold,
                            const SqueezeElementFn& candidate) {
  if (n_compare < 1 || n_trunc < 2 * n_compare + 20) {
    throw ParameterError("squeeze_oracle needs n_trunc >= 2*n_compare + 20");
  }
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n_trunc, n_trunc);
  for (int n = 1; n < n_trunc; ++n) b(n - 1, n) = std::sqrt(static_cast<double>(n));
  const Eigen::MatrixXd generator = 0.5 * xi * (b * b - b.transpose() * b.transpose());
  const Eigen::MatrixXd reference = generator.exp();

  OracleReport report;
  report.context = "squeeze xi=" + std::to_string(xi) + " compare=" + std::to_string(n_compare) +
                   " trunc=" + std::to_string(n_trunc);
  report.threshold = threshold;
  for (int m = 0; m < n_compare; ++m) {
    for (int n = 0; n < n_compare; ++n) {
      const double err = std::abs(reference(m, n) - candidate(m, n, xi));
      report.max_abs_error = std::max(report.max_abs_error, err);
      ++report.comparison_count;
    }
  }
  return report;
}

namespace {

using State = std::vector<Complex>;
using RowMajorDense = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowMajorSparse = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

// rho' = -i[H, rho] + sum_k (c rho c' - {c'c, rho}/2), in matrix form.
// The state is stored row-major so that every product is sparse x dense;
// right multiplications use X c = (c' X')'.
class MasterEquationRhs {
 public:
  MasterEquationRhs(const ModelParams& params, const FockSpace& space)
      : dim_(space.dim()), h_(build_hamiltonian(params, space)) {
    const auto ops = ModeOperators::build(space);
    auto add = [&](double rate, const SparseOperator& c) {
      if (rate <= 0.0) return;
      const SparseOperator scaled = std::sqrt(rate) * c;
      jumps_.emplace_back(scaled);
      jumps_dd_.emplace_back(SparseOperator(SparseOperator(scaled.adjoint()) * scaled));
    };
    add(params.gamma_c, ops.a);
    add(params.gamma_m * (params.n_th + 1.0), ops.b);
    add(params.gamma_m * params.n_th, SparseOperator(ops.b.adjoint()));
    rho_adj_.resize(dim_, dim_);
    left_.resize(dim_, dim_);
    right_.resize(dim_, dim_);
  }

  void operator()(const State& x, State& dxdt, double /*t*/) const {
    Eigen::Map<const RowMajorDense> rho(x.data(), dim_, dim_);
    Eigen::Map<RowMajorDense> out(dxdt.data(), dim_, dim_);
    rho_adj_ = rho.adjoint();

    left_.noalias() = h_ * rho;
    right_.noalias() = h_ * rho_adj_;  // (rho H)'
    out = Complex(0.0, -1.0) * (left_ - right_.adjoint());
    for (std::size_t k = 0; k < jumps_.size(); ++k) {
      right_.noalias() = jumps_[k] * rho_adj_;  // (rho c')'
      left_ = right_.adjoint();
      out.noalias() += jumps_[k] * left_;
      left_.noalias() = jumps_dd_[k] * rho;
      right_.noalias() = jumps_dd_[k] * rho_adj_;
      out -= 0.5 * (left_ + right_.adjoint());
    }
  }

 private:
  int dim_;
  RowMajorSparse h_;
  std::vector<RowMajorSparse> jumps_;
  std::vector<RowMajorSparse> jumps_dd_;
  mutable RowMajorDense rho_adj_;
  mutable RowMajorDense left_;
  mutable RowMajorDense right_;
};

}  // namespace

DensityMatrix evolve_to_steady(const ModelParams& params, const FockSpace& space, double t_final,
                               double dt_max) {
  namespace odeint = boost::numeric::odeint;
  space.validate();
  if (!(t_final > 0.0) || !(dt_max > 0.0)) throw ParameterError("t_final and dt_max must be positive");

  const int d = space.dim();
  const MasterEquationRhs rhs(params, space);
  State x(static_cast<std::size_t>(d) * d, Complex(0.0, 0.0));
  x[0] = 1.0;

  auto stepper = odeint::make_controlled(1e-12, 1e-10, odeint::runge_kutta_dopri5<State>());
  constexpr double kTraceDriftPerTime = 1e-10;
  constexpr double kHermiticity = 1e-10;
  const double dt_floor = 1e-12 * t_final;

  auto trace_of = [d](const State& s) {
    Complex tr(0.0, 0.0);
    for (int k = 0; k < d; ++k) tr += s[static_cast<std::size_t>(k) * d + k];
    return tr;
  };
  auto hermiticity_of = [d](const State& s) {
    Eigen::Map<const RowMajorDense> rho(s.data(), d, d);
    return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  };

  double t = 0.0;
  double dt = std::min(dt_max, 1e-3);
  long accepted = 0;
  long rejected = 0;
  State saved;
  while (t < t_final) {
    dt = std::min({dt, dt_max, t_final - t});
    if (dt < dt_floor) {
      throw StiffnessError("time step underflow at t=" + std::to_string(t) +
                           "; use the direct steady-state solver instead");
    }
    saved = x;
    const double t_before = t;
    if (stepper.try_step(rhs, x, t, dt) == odeint::fail) {  // dt already reduced
      ++rejected;
      continue;
    }

    const double drift = std::abs(trace_of(x) - Complex(1.0, 0.0));
    if (drift > kTraceDriftPerTime * std::max(t, 1.0) || hermiticity_of(x) > kHermiticity) {
      spdlog::debug("step rejected at t={} dt={}: trace drift {:.3e}, hermiticity {:.3e}", t_before, t - t_before, drift, hermiticity_of(x));
      dt = 0.5 * (t - t_before);
      x = saved;
      t = t_before;
      ++rejected;
    } else {
      ++accepted;
    }
  }
  spdlog::debug("time evolution to t={}: {} accepted, {} rejected steps", t_final, accepted, rejected);
  return DensityMatrix{DenseOperator(Eigen::Map<const RowMajorDense>(x.data(), d, d)), space};
}

double trace_distance(const DenseOperator& rho, const DenseOperator& sigma) {
  const DenseOperator diff = rho - sigma;
  const DenseOperator herm = 0.5 * (diff + diff.adjoint());
  Eigen::SelfAdjointEigenSolver<DenseOperator> eig(herm, Eigen::EigenvaluesOnly);
  return 0.5 * eig.eigenvalues().cwiseAbs().sum();
}

std::vector<SmokeCase> solver_smoke_set() {
  constexpr double kGammaM = 0.05;
  const double t_final = 20.0 / kGammaM;

  ModelParams dark;
  dark.g0 = 0.8;
  dark.gamma_c = 0.1;
  dark.gamma_m = kGammaM;

  ModelParams linear;
  linear.gamma_c = 0.1;
  linear.omega_drive = 0.01;
  linear.gamma_m = kGammaM;

  ModelParams blockade;
  blockade.g0 = 0.8;
  blockade.gamma_c = 0.1;
  blockade.omega_drive = 0.01;
  blockade.gamma_m = kGammaM;
  blockade.delta_c = -dressed_level(blockade, 1, 0).delta_s;

  return {
      {"dark-vacuum", dark, FockSpace{2, 5}, t_final, 0.5},
      {"linear-coherent", linear, FockSpace{5, 3}, t_final, 0.5},
      {"single-photon-resonance", blockade, FockSpace{4, 13}, t_final, 0.5},
  };
}

OracleReport cross_validate_steady_state(const SmokeCase& smoke, double threshold) {
  SteadyStateOptions options;
  options.method = SteadyStateMethod::direct;
  options.retry_truncation = false;
  const auto direct = solve_steady_state(build_liouvillian(smoke.params, smoke.space), options);
  const auto evolved = evolve_to_steady(smoke.params, smoke.space, smoke.t_final, smoke.dt_max);

  OracleReport report;
  report.context = "steady state vs time evolution: " + smoke.name;
  report.threshold = threshold;
  report.comparison_count = 1;
  report.max_abs_error = trace_distance(direct.state.rho, evolved.rho);
  return report;
}

}  // namespace quadblockade
