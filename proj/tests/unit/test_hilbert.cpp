#include <cmath>
#include <random>

#include "doctest.h"
#include "quadblockade/errors.hpp"
#include "quadblockade/hilbert.hpp"

using namespace quadblockade;

namespace {

DenseOperator dense(const SparseOperator& op) { return DenseOperator(op); }

DenseOperator random_matrix(int n, std::mt19937& rng) {
  std::normal_distribution<double> dist;
  DenseOperator m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Complex(dist(rng), dist(rng));
  return m;
}

}  // namespace

TEST_CASE("annihilator has sqrt(n) on the superdiagonal") {
  const DenseOperator a2 = dense(annihilator(2));
  CHECK(a2(0, 1) == Complex(1.0, 0.0));
  CHECK(a2(0, 0) == Complex(0.0, 0.0));
  CHECK(a2(1, 0) == Complex(0.0, 0.0));
  CHECK(a2(1, 1) == Complex(0.0, 0.0));

  const DenseOperator a = dense(annihilator(5));
  Eigen::VectorXcd vac = Eigen::VectorXcd::Zero(5);
  vac(0) = 1.0;
  CHECK((a * vac).norm() == 0.0);
  CHECK(a(1, 2).real() == doctest::Approx(1.41421356).epsilon(1e-9));
}

TEST_CASE("annihilator rejects fewer than two levels") {
  CHECK_THROWS_AS(annihilator(1), DimensionError);
  CHECK_THROWS_AS(annihilator(0), DimensionError);
}

TEST_CASE("truncated ladder identities hold on the interior") {
  const int n = 7;
  const DenseOperator a = dense(annihilator(n));
  const DenseOperator num = a.adjoint() * a;
  const DenseOperator comm = a * a.adjoint() - a.adjoint() * a;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) {
        CHECK(std::abs(num(i, j) - Complex(i, 0.0)) < 1e-14);
      } else {
        CHECK(num(i, j) == Complex(0.0, 0.0));
      }
      if (i < n - 1 && j < n - 1) {
        CHECK(std::abs(comm(i, j) - Complex(i == j ? 1.0 : 0.0, 0.0)) < 1e-14);
      }
    }
  }
  CHECK(std::abs(comm(n - 1, n - 1) - Complex(1.0 - n, 0.0)) < 1e-14);

  const DenseOperator x = a + a.adjoint();
  const DenseOperator x2 = x * x;
  const DenseOperator expected =
      a.adjoint() * a.adjoint() + a * a + 2.0 * num + DenseOperator::Identity(n, n);
  CHECK((x2 - expected).topLeftCorner(n - 1, n - 1).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((x2 - expected).cwiseAbs().maxCoeff() > 0.5);  // truncation artifact in the last entry
}

TEST_CASE("tensor product ordering") {
  CHECK(dense(tensor(identity(2), identity(3))).isApprox(DenseOperator::Identity(6, 6)));

  SparseOperator n2(2, 2);
  n2.insert(1, 1) = 1.0;
  const DenseOperator lifted = dense(tensor(n2, identity(2)));
  DenseOperator expected = DenseOperator::Zero(4, 4);
  expected(2, 2) = 1.0;
  expected(3, 3) = 1.0;
  CHECK(lifted == expected);

  std::mt19937 rng(7);
  const DenseOperator a = random_matrix(3, rng);
  const DenseOperator b = random_matrix(3, rng);
  const SparseOperator as = a.sparseView();
  const SparseOperator bs = b.sparseView();
  const DenseOperator lhs = dense(tensor(as, identity(3))) * dense(tensor(identity(3), bs));
  const DenseOperator rhs = dense(tensor(as, bs));
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("uncoupled undriven Hamiltonian is diagonal") {
  ModelParams p;
  p.delta_c = 0.37;
  p.omega_m = 1.3;
  const FockSpace space{3, 5};
  const DenseOperator h = dense(build_hamiltonian(p, space));
  for (int i = 0; i < space.dim(); ++i) {
    for (int j = 0; j < space.dim(); ++j) {
      if (i != j) CHECK(h(i, j) == Complex(0.0, 0.0));
    }
  }
  for (int s = 0; s <= space.n_photon_max; ++s) {
    for (int m = 0; m <= space.n_phonon_max; ++m) {
      const int k = space.index(s, m);
      CHECK(h(k, k).real() == doctest::Approx(s * p.delta_c + m * p.omega_m).epsilon(1e-15));
    }
  }
}

TEST_CASE("Hamiltonian is Hermitian and linear in the drive") {
  ModelParams p;
  p.delta_c = -0.4;
  p.g0 = 0.8;
  p.omega_drive = 0.03;
  const FockSpace space{4, 12};
  const DenseOperator h = dense(build_hamiltonian(p, space));
  CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-14);

  ModelParams p2 = p;
  p2.omega_drive = 2.0 * p.omega_drive;
  const DenseOperator diff = dense(build_hamiltonian(p2, space)) - h;
  const auto ops = ModeOperators::build(space);
  const DenseOperator drive = p.omega_drive * dense(SparseOperator(ops.a + SparseOperator(ops.a.adjoint())));
  CHECK((diff - drive).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("undriven Hamiltonian conserves photon number") {
  ModelParams p;
  p.delta_c = 0.2;
  p.g0 = 0.8;
  const FockSpace space{4, 15};
  const auto ops = ModeOperators::build(space);
  const DenseOperator h = dense(build_hamiltonian(p, space));
  const DenseOperator n = dense(SparseOperator(SparseOperator(ops.a.adjoint()) * ops.a));
  CHECK((h * n - n * h).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("one-photon block ground level equals the dressed shift") {
  ModelParams p;
  p.g0 = 0.8;
  const FockSpace space{2, 80};
  const DenseOperator h = dense(build_hamiltonian(p, space));
  const int nb = space.phonon_levels();
  const DenseOperator block = h.block(space.index(1, 0), space.index(1, 0), nb, nb);
  Eigen::SelfAdjointEigenSolver<DenseOperator> eig(block, Eigen::EigenvaluesOnly);
  CHECK(eig.eigenvalues()(0) == doctest::Approx((std::sqrt(4.2) - 1.0) / 2.0).epsilon(1e-10));
}

TEST_CASE("stability violation names the photon number") {
  ModelParams p;
  p.g0 = -0.3;
  try {
    build_hamiltonian(p, FockSpace{4, 5});
    FAIL("expected ParameterError");
  } catch (const ParameterError& e) {
    CHECK(e.photon_number() == 1);
  }
  CHECK_THROWS_AS(build_hamiltonian(ModelParams{}, FockSpace{1, 5}), DimensionError);
  CHECK_THROWS_AS(build_hamiltonian(ModelParams{}, FockSpace{2, 0}), DimensionError);
  ModelParams neg;
  neg.gamma_c = -0.1;
  CHECK_THROWS_AS(neg.validate(), ParameterError);
}
