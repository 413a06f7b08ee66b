#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "ionsense/hilbert.hpp"

using namespace ionsense;

namespace {
const Complex kI(0.0, 1.0);
}

TEST_CASE("space dimensions and basis ordering") {
  HilbertSpace single({3});
  CHECK(single.dim() == 6);
  HilbertSpace two({12, 12});
  CHECK(two.dim() == 2 * 144);

  const int occ_a[] = {1, 2};
  CHECK(two.basis_index(0, occ_a) == 1 * 12 + 2);
  CHECK(two.basis_index(1, occ_a) == 144 + 14);

  CHECK_THROWS_AS(HilbertSpace({}), std::invalid_argument);
  CHECK_THROWS_AS(HilbertSpace({1}), std::invalid_argument);
}

TEST_CASE("mode lowering matrix elements") {
  HilbertSpace space({3});
  Operator a = mode_lowering(space, 0);
  // Spin-up block of the mode factor: a[n-1, n] = sqrt(n).
  CHECK(a.matrix(0, 1) == Complex(1.0));
  CHECK(a.matrix(1, 2).real() == doctest::Approx(std::sqrt(2.0)));
  CHECK(a.matrix(1, 0) == Complex(0.0));
  CHECK(a.matrix(2, 2) == Complex(0.0));

  CHECK_THROWS_AS(mode_lowering(space, 1), std::invalid_argument);
  CHECK_THROWS_AS(mode_lowering(space, -1), std::invalid_argument);
}

TEST_CASE("number operator is a dag a") {
  HilbertSpace space({4});
  Operator a = mode_lowering(space, 0);
  Operator n = mode_number(space, 0);
  CHECK(max_abs((adjoint(a) * a - n).matrix) <= 1e-14);
  for (int k = 0; k < 4; ++k) {
    CHECK(n.matrix(k, k).real() == doctest::Approx(double(k)));
  }
}

TEST_CASE("ladder commutator deviates only at the top Fock level") {
  const int cutoff = 5;
  HilbertSpace space({cutoff});
  Operator a = mode_lowering(space, 0);
  Operator c = commutator(a, adjoint(a)) - identity_op(space);
  for (int spin = 0; spin < 2; ++spin) {
    for (int m = 0; m < cutoff; ++m) {
      for (int n = 0; n < cutoff; ++n) {
        const int occ_m[] = {m};
        const int occ_n[] = {n};
        const Complex v = c.matrix(space.basis_index(spin, occ_m),
                                   space.basis_index(spin, occ_n));
        if (m == cutoff - 1 && n == cutoff - 1) {
          CHECK(v.real() == doctest::Approx(-double(cutoff)));
        } else {
          CHECK(std::abs(v) <= 1e-14);
        }
      }
    }
  }
}

TEST_CASE("pauli conventions and ladder algebra") {
  HilbertSpace space({2});
  Operator sz = spin_operator(space, Pauli::Z);
  Operator sx = spin_operator(space, Pauli::X);
  Operator sy = spin_operator(space, Pauli::Y);
  Operator sp = spin_operator(space, Pauli::Plus);
  Operator sm = spin_operator(space, Pauli::Minus);

  const int zero[] = {0};
  QuantumState up = fock_state(space, Spin::Up, zero);
  QuantumState down = fock_state(space, Spin::Down, zero);
  CHECK(expectation(up, sz) == doctest::Approx(1.0));
  CHECK(expectation(down, sz) == doctest::Approx(-1.0));

  CHECK(max_abs((sp * sm + sm * sp - identity_op(space)).matrix) <= 1e-14);
  CHECK(max_abs((commutator(sx, sy) - 2.0 * kI * sz).matrix) <= 1e-14);
  // sigma_y = i (sigma_- - sigma_+)
  CHECK(max_abs((sy - kI * (sm - sp)).matrix) <= 1e-14);
  // sigma_plus maps |down> to |up>
  Vector flipped = sp.matrix * down.amplitudes;
  CHECK(std::abs(flipped(space.basis_index(0, zero)) - 1.0) <= 1e-14);
}

TEST_CASE("operators on different factors commute exactly") {
  HilbertSpace space({4, 4});
  Operator ax = mode_lowering(space, 0);
  Operator ay = mode_lowering(space, 1);
  CHECK(max_abs(commutator(ax, ay).matrix) <= 1e-15);
  CHECK(max_abs(commutator(ax + adjoint(ax), mode_number(space, 1)).matrix) <= 1e-12);
  CHECK(max_abs(commutator(spin_operator(space, Pauli::X), ay).matrix) <= 1e-15);
}

TEST_CASE("matrix exponential basics") {
  HilbertSpace space({3});
  Operator n = mode_number(space, 0);
  CHECK(max_abs((matrix_exponential(n, 0.0) - identity_op(space)).matrix) <= 1e-14);

  // exp(i pi n) = diag(1, -1, 1) on the mode factor
  Operator flip = matrix_exponential(n, kI * std::acos(-1.0));
  const int occ0[] = {0}, occ1[] = {1}, occ2[] = {2};
  CHECK(flip.matrix(space.basis_index(0, occ0), space.basis_index(0, occ0)).real() ==
        doctest::Approx(1.0));
  CHECK(flip.matrix(space.basis_index(0, occ1), space.basis_index(0, occ1)).real() ==
        doctest::Approx(-1.0));
  CHECK(flip.matrix(space.basis_index(1, occ2), space.basis_index(1, occ2)).real() ==
        doctest::Approx(1.0));

  Operator bad{space, Matrix::Constant(space.dim(), space.dim(),
                                       std::numeric_limits<double>::infinity())};
  CHECK_THROWS_AS(matrix_exponential(bad, 1.0), std::invalid_argument);
}

TEST_CASE("exponential of anti-Hermitian input is unitary") {
  HilbertSpace space({20});  // dimension 40
  std::mt19937 rng(12345);
  std::normal_distribution<double> dist(0.0, 1.0);
  Matrix m(space.dim(), space.dim());
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      m(r, c) = Complex(dist(rng), dist(rng));
    }
  }
  Matrix h = 0.5 * (m + m.adjoint());
  Operator u = matrix_exponential({space, h}, -kI);
  CHECK(max_abs(Matrix(u.matrix.adjoint() * u.matrix -
                       Matrix::Identity(space.dim(), space.dim()))) <= 1e-9);
}

TEST_CASE("fock states") {
  HilbertSpace space({4});
  const int occ2[] = {2};
  QuantumState s = fock_state(space, Spin::Up, occ2);
  CHECK(std::abs(s.amplitudes(space.basis_index(0, occ2)) - 1.0) <= 1e-15);
  CHECK(expectation(s, mode_number(space, 0)) == doctest::Approx(2.0));

  const int occ1[] = {1};
  QuantumState t = fock_state(space, Spin::Up, occ1);
  CHECK(std::abs((t.amplitudes.adjoint() * s.amplitudes)(0)) <= 1e-15);

  const int over[] = {4};
  CHECK_THROWS_AS(fock_state(space, Spin::Up, over), std::invalid_argument);
}

TEST_CASE("thermal state distribution") {
  HilbertSpace space({30});

  QuantumState ground = thermal_state(space, 0, 0.0);
  const int occ0[] = {0};
  CHECK(ground.density(space.basis_index(0, occ0), space.basis_index(0, occ0)).real() ==
        doctest::Approx(1.0));

  const double nbar = 1.2;
  QuantumState th = thermal_state(space, 0, nbar);
  const double tail = thermal_tail_mass(nbar, 30);
  // Un-renormalized weights p_n = nbar^n / (1+nbar)^(n+1).
  const double p0 = th.density(0, 0).real() * (1.0 - tail);
  const int occ1[] = {1};
  const double p1 =
      th.density(space.basis_index(0, occ1), space.basis_index(0, occ1)).real() *
      (1.0 - tail);
  CHECK(p0 == doctest::Approx(0.45454545454545453).epsilon(1e-12));
  CHECK(p1 == doctest::Approx(0.2479338842975206).epsilon(1e-12));

  CHECK(expectation(th, mode_number(space, 0)) == doctest::Approx(nbar).epsilon(0.01));
  CHECK(th.density.trace().real() == doctest::Approx(1.0).epsilon(1e-12));

  Eigen::SelfAdjointEigenSolver<Matrix> es(th.density, Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues().minCoeff() >= -1e-15);
  CHECK(es.eigenvalues().sum() == doctest::Approx(1.0).epsilon(1e-12));

  CHECK(purity(th) < 1.0);
  CHECK_THROWS_AS(thermal_state(space, 0, -0.5), std::invalid_argument);
}

TEST_CASE("thermal mean occupation tracks nbar once the cutoff is generous") {
  for (double nbar : {0.5, 1.2, 2.0}) {
    const int cutoff = static_cast<int>(10.0 * (nbar + 1.0));
    HilbertSpace space({cutoff});
    QuantumState th = thermal_state(space, 0, nbar);
    CHECK(expectation(th, mode_number(space, 0)) ==
          doctest::Approx(nbar).epsilon(0.01));
  }
}

TEST_CASE("spin superposition") {
  HilbertSpace space({4});
  const int occ0[] = {0};
  QuantumState ground = fock_state(space, Spin::Up, occ0);

  QuantumState plain = spin_superposition(space, 1.0, 0.0, ground);
  CHECK((plain.amplitudes - ground.amplitudes).norm() <= 1e-15);

  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  QuantumState balanced = spin_superposition(space, inv_sqrt2, inv_sqrt2, ground);
  CHECK(std::abs(expectation(balanced, spin_operator(space, Pauli::Z))) <= 1e-12);

  // c_down = e^{i phi}/sqrt(2) gives <sigma_y> = sin(phi).
  const Complex quarter = std::polar(inv_sqrt2, std::acos(-1.0) / 2.0);
  QuantumState rotated = spin_superposition(space, inv_sqrt2, quarter, ground);
  CHECK(expectation(rotated, spin_operator(space, Pauli::Y)) == doctest::Approx(1.0));
  for (double phi : {0.3, 1.1, 2.5}) {
    QuantumState st = spin_superposition(space, inv_sqrt2,
                                         std::polar(inv_sqrt2, phi), ground);
    CHECK(expectation(st, spin_operator(space, Pauli::Y)) ==
          doctest::Approx(std::sin(phi)).epsilon(1e-10));
  }

  CHECK_THROWS_AS(spin_superposition(space, 1.0, 0.5, ground),
                  std::invalid_argument);

  // Mixed motional input stays mixed and keeps its phonon statistics.
  QuantumState th = thermal_state(space, 0, 0.8);
  QuantumState mixed = spin_superposition(space, inv_sqrt2, inv_sqrt2, th);
  CHECK(mixed.kind == StateKind::Mixed);
  CHECK(std::abs(expectation(mixed, spin_operator(space, Pauli::Z))) <= 1e-12);
  CHECK(expectation(mixed, mode_number(space, 0)) ==
        doctest::Approx(expectation(th, mode_number(space, 0))).epsilon(1e-12));
}

TEST_CASE("hermitian builders stay hermitian") {
  HilbertSpace space({12, 12});
  CHECK(is_hermitian(mode_number(space, 0)));
  CHECK(is_hermitian(mode_number(space, 1)));
  CHECK(is_hermitian(spin_operator(space, Pauli::X)));
  CHECK(is_hermitian(spin_operator(space, Pauli::Y)));
  CHECK(is_hermitian(spin_operator(space, Pauli::Z)));
  Operator a = mode_lowering(space, 0);
  CHECK(is_hermitian(a + adjoint(a)));
}

TEST_CASE("state validation catches broken inputs") {
  HilbertSpace space({3});
  Vector psi = Vector::Zero(space.dim());
  psi(0) = 0.7;
  CHECK_THROWS_AS(QuantumState::pure(space, psi), std::invalid_argument);

  Matrix rho = Matrix::Zero(space.dim(), space.dim());
  rho(0, 0) = 0.9;
  CHECK_THROWS_AS(QuantumState::mixed(space, rho), std::invalid_argument);
}

TEST_CASE("tail population and safe subspace bookkeeping") {
  HilbertSpace space({4});
  const int top[] = {3};
  QuantumState s = fock_state(space, Spin::Down, top);
  CHECK(mode_tail_population(s, 0) == doctest::Approx(1.0));
  const int inner[] = {1};
  CHECK(mode_tail_population(fock_state(space, Spin::Up, inner), 0) ==
        doctest::Approx(0.0));

  const auto keep = safe_subspace_indices(space, 2);
  CHECK(keep.size() == 4);  // two spins times occupations {0, 1}
}
