#include <cmath>

#include "doctest.h"
#include "quadblockade/errors.hpp"
#include "quadblockade/oracles.hpp"
#include "quadblockade/spectrum.hpp"

using namespace quadblockade;

TEST_CASE("squeeze oracle at zero squeezing is exact") {
  const auto report = squeeze_oracle(0.0, 10, 40);
  CHECK(report.max_abs_error == 0.0);
  CHECK(report.comparison_count == 100);
  CHECK(report.passed());
}

TEST_CASE("squeeze oracle at the one-photon squeeze factor") {
  const auto report = squeeze_oracle(0.35877, 25, 70);
  CHECK(report.max_abs_error < 1e-8);
  CHECK(report.passed());
  CHECK(squeeze_oracle(-0.35877, 25, 70).passed());
}

TEST_CASE("squeeze oracle needs enough headroom") {
  CHECK_THROWS_AS(squeeze_oracle(0.3, 25, 69), ParameterError);
  CHECK_NOTHROW(squeeze_oracle(0.3, 25, 70));
}

TEST_CASE("squeeze oracle catches a mutated element formula") {
  // Sign slip in the cosh exponent: (cosh xi)^(+1/2) instead of ^(-1/2).
  const auto mutated = [](int m, int n, double xi) {
    const double v = squeeze_matrix_element(m, n, xi);
    return v * std::cosh(xi);
  };
  CHECK_FALSE(squeeze_oracle(0.35877, 25, 70, 1e-8, mutated).passed());
  const auto off_by_tiny = [](int m, int n, double xi) {
    return squeeze_matrix_element(m, n, xi) + (m == 3 && n == 1 ? 1e-7 : 0.0);
  };
  CHECK_FALSE(squeeze_oracle(0.35877, 25, 70, 1e-8, off_by_tiny).passed());
}

TEST_CASE("trace distance") {
  DenseOperator a = DenseOperator::Zero(2, 2);
  DenseOperator b = DenseOperator::Zero(2, 2);
  a(0, 0) = 1.0;
  b(1, 1) = 1.0;
  CHECK(trace_distance(a, b) == doctest::Approx(1.0));
  CHECK(trace_distance(a, a) == 0.0);
}

TEST_CASE("time evolution of a dark cavity stays in the vacuum") {
  ModelParams p;
  p.g0 = 0.8;
  p.gamma_c = 0.1;
  p.gamma_m = 0.05;
  const FockSpace space{2, 4};
  const auto rho = evolve_to_steady(p, space, 50.0, 0.5);
  DenseOperator vac = DenseOperator::Zero(space.dim(), space.dim());
  vac(0, 0) = 1.0;
  CHECK(trace_distance(rho.rho, vac) < 1e-8);
}

TEST_CASE("time evolution reaches the coherent state") {
  ModelParams p;
  p.gamma_c = 0.1;
  p.omega_drive = 0.01;
  p.gamma_m = 0.05;
  const FockSpace space{3, 3};
  const auto state = evolve_to_steady(p, space, 400.0, 0.5);
  CHECK(std::abs(photon_moments(state).mean_photons - 0.04) < 1e-4);
  CHECK((state.rho - state.rho.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(std::abs(state.rho.trace() - Complex(1.0, 0.0)) < 1e-10 * 400.0);
}

TEST_CASE("evolve_to_steady validates its arguments") {
  CHECK_THROWS_AS(evolve_to_steady(ModelParams{}, FockSpace{2, 2}, 0.0, 0.5), ParameterError);
  CHECK_THROWS_AS(evolve_to_steady(ModelParams{}, FockSpace{2, 2}, 1.0, -0.5), ParameterError);
}

TEST_CASE("smoke set cross-validation") {
  const auto smoke = solver_smoke_set();
  REQUIRE(smoke.size() == 3);
  for (const auto& c : smoke) {
    CHECK(c.space.dim() <= 300);
    const auto report = cross_validate_steady_state(c);
    INFO(report.context << " distance " << report.max_abs_error);
    CHECK(report.passed());
  }
}
