#include "doctest.h"

#include "fockgeom/fock_core.hpp"
#include "test_support.hpp"

using namespace fockgeom;
using testing_support::random_disk;

TEST_CASE("ladder and su(1,1) matrices at dim 4") {
  const OperatorSet ops = build_operators(4);
  for (int n = 1; n < 4; ++n) CHECK(ops.a(n - 1, n).real() == doctest::Approx(std::sqrt(n)));
  CHECK(ops.a.diagonal().cwiseAbs().maxCoeff() == 0.0);
  for (int n = 0; n < 4; ++n) {
    CHECK(ops.n_op(n, n).real() == doctest::Approx(n));
    CHECK(ops.k3(n, n).real() == doctest::Approx(0.5 * (n + 0.5)));
  }
  // K+ |0> = |2> / sqrt(2)
  CHECK(ops.k_plus(2, 0).real() == doctest::Approx(std::sqrt(2.0) / 2.0));
  CHECK((ops.k_minus - ops.k_plus.adjoint()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("commutators hold away from the truncation edge") {
  const OperatorSet ops = build_operators(64);
  CHECK(commutator_defect(ops) < 1e-13); // sqrt(n+1)^2 - sqrt(n)^2 rounds
  CHECK(su11_relation_defect(ops) < 1e-12);
}

TEST_CASE("quadratures are Hermitian and scale with hbar, omega") {
  const OperatorSet ops = build_operators(16, 2.0, 0.5);
  CHECK((ops.q_op - ops.q_op.adjoint()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((ops.p_op - ops.p_op.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(ops.q_op(0, 1).real() == doctest::Approx(std::sqrt(2.0 / 1.0)));
  CHECK(ops.p_op(1, 0).imag() == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("operator construction rejects bad inputs") {
  CHECK_THROWS_AS(build_operators(1), InvalidDimension);
  CHECK_THROWS_AS(build_operators(8, 0.0), InvalidArgument);
  CHECK_THROWS_AS(build_operators(8, 1.0, -1.0), InvalidArgument);
  CHECK_THROWS_AS(FockState::basis(4, 4), IndexOutOfRange);
}

TEST_CASE("matrix exponential") {
  SUBCASE("nilpotent") {
    CMatrix m = CMatrix::Zero(2, 2);
    m(0, 1) = 3.0;
    const CMatrix e = matrix_exponential(m);
    CHECK(std::abs(e(0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(e(0, 1) - 3.0) < 1e-14);
    CHECK(std::abs(e(1, 0)) == 0.0);
  }
  SUBCASE("diagonal") {
    CMatrix m = CMatrix::Zero(3, 3);
    m(0, 0) = Complex(0.0, M_PI);
    m(1, 1) = 1.0;
    m(2, 2) = -2.0;
    const CMatrix e = matrix_exponential(m);
    CHECK(std::abs(e(0, 0) + 1.0) < 1e-14);
    CHECK(std::abs(e(1, 1) - std::exp(1.0)) < 1e-14);
    CHECK(std::abs(e(2, 2) - std::exp(-2.0)) < 1e-15);
  }
  SUBCASE("anti-Hermitian generator gives a unitary") {
    const OperatorSet ops = build_operators(40);
    const CMatrix u = matrix_exponential(displacement_generator({0.3, -0.2}, ops));
    CHECK((u.adjoint() * u - CMatrix::Identity(40, 40)).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(matrix_exponential(CMatrix::Zero(2, 3)), InvalidMatrix);
    CMatrix bad = CMatrix::Zero(2, 2);
    bad(1, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(matrix_exponential(bad), InvalidMatrix);
  }
}

TEST_CASE("property: exponential action agrees with the dense exponential") {
  std::mt19937_64 rng(7);
  const OperatorSet ops = build_operators(80);
  for (int k = 0; k < 5; ++k) {
    const CMatrix gen = displacement_generator(random_disk(rng, 2.0), ops) +
                        squeeze_generator(random_disk(rng, 1.0), ops);
    const CMatrix v = CMatrix::Random(80, 3);
    const CMatrix dense = matrix_exponential(gen) * v;
    CHECK((exponential_action(gen, v) - dense).cwiseAbs().maxCoeff() < 1e-12);
  }
  CHECK((exponential_action(CMatrix::Zero(3, 3), CMatrix::Identity(3, 2)) - CMatrix::Identity(3, 2))
            .cwiseAbs()
            .maxCoeff() == 0.0);
  CHECK_THROWS_AS(exponential_action(CMatrix::Zero(3, 3), CMatrix::Zero(4, 1)), DimensionMismatch);
  CHECK_THROWS_AS(exponential_action(CMatrix::Zero(3, 2), CMatrix::Zero(3, 1)), InvalidMatrix);
}

TEST_CASE("coherent state matches the Poisson amplitudes") {
  const OperatorSet ops = build_operators(64);
  for (Complex alpha : {Complex(0.0, 0.0), Complex(0.7, -0.4), Complex(-1.5, 1.0)}) {
    const FockState s = coherent_state(alpha, ops);
    const Eigen::VectorXcd ref = testing_support::poisson_coefficients(alpha, 64);
    CHECK((s.coeffs() - ref).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("squeezed vacuum matches the even-level closed form") {
  const OperatorSet ops = build_operators(96);
  for (Complex beta : {Complex(0.5, 0.0), Complex(0.0, -0.8), Complex(0.3, 0.4)}) {
    const FockState s = cs_state(0.0, beta, ops);
    const Eigen::VectorXcd ref = testing_support::squeezed_vacuum_coefficients(beta, 96);
    // The top levels carry the truncation error of the dense exponential.
    CHECK((s.coeffs() - ref).head(64).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("cs_state basics") {
  const OperatorSet ops = build_operators(64);
  const FockState vac = cs_state(0.0, 0.0, ops);
  CHECK(std::abs(vac[0] - 1.0) < 1e-15);
  CHECK(tail_mass(vac, 1) < 1e-30);

  const FockState s = cs_state({0.5, 0.2}, {0.1, -0.3}, ops);
  CHECK(s.squared_norm() == doctest::Approx(1.0).epsilon(1e-12));
  // U(alpha) alone: <q> = sqrt(2) Re alpha for hbar = omega = 1
  const FockState c = coherent_state({0.5, 0.2}, ops);
  CHECK(expectation(c, ops.q_op).real() == doctest::Approx(std::sqrt(2.0) * 0.5));
  CHECK(expectation(c, ops.p_op).real() == doctest::Approx(std::sqrt(2.0) * 0.2));
}

TEST_CASE("expectation and inner product validate their inputs") {
  const OperatorSet ops = build_operators(8);
  CHECK_THROWS_AS(expectation(FockState::vacuum(4), ops.q_op), DimensionMismatch);
  CHECK_THROWS_AS(expectation(FockState(CVector::Constant(8, 1.0)), ops.q_op), InvalidArgument);
  CHECK_THROWS_AS(inner_product(FockState::vacuum(4), FockState::vacuum(8)), DimensionMismatch);
  CHECK_THROWS_AS(tail_mass(FockState::vacuum(4), 4), IndexOutOfRange);
}

TEST_CASE("tail guard trips on undersized spaces and the policy escalates") {
  const OperatorSet small = build_operators(24);
  CHECK_THROWS_AS(coherent_state({2.0, 0.0}, small), TruncationOverflow);

  TruncationPolicy policy;
  policy.target_dim = 8;
  int used = 0;
  const double norm = with_truncation(policy, 1.0, 1.0, [&](const OperatorSet& ops) {
    used = ops.dim;
    return cs_state({1.8, 0.0}, {0.5, 0.0}, ops).squared_norm();
  });
  CHECK(used > 24);
  CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));

  policy.max_dim = 16;
  CHECK_THROWS_AS(with_truncation(policy, 1.0, 1.0,
                                  [&](const OperatorSet& ops) { return coherent_state(2.0, ops).dim(); }),
                  TruncationOverflow);
}

TEST_CASE("guard range") {
  CHECK_NOTHROW(require_guard_range({2.0, 0.0}, {0.0, 1.0}, "test"));
  CHECK_THROWS_AS(require_guard_range({2.0, 0.01}, 0.0, "test"), GuardRangeViolation);
  CHECK_THROWS_AS(require_guard_range(0.0, 1.0001, "test"), GuardRangeViolation);
  CHECK_THROWS_AS(require_guard_range(0.0, std::nan(""), "test"), GuardRangeViolation);
}

TEST_CASE("property: random coherent-squeezed states are normalized") {
  std::mt19937_64 rng(11);
  TruncationPolicy policy;
  policy.target_dim = 144;
  for (int k = 0; k < 20; ++k) {
    const Complex a = random_disk(rng, 2.0), b = random_disk(rng, 1.0);
    const double norm = with_truncation(policy, 1.0, 1.0, [&](const OperatorSet& ops) {
      return cs_state(a, b, ops).squared_norm();
    });
    CHECK(std::abs(norm - 1.0) < 1e-10);
  }
}
