#include <doctest.h>

#include <cmath>

#include "steer/error.hpp"
#include "steer/linalg.hpp"
#include "steer/random.hpp"
#include "support.hpp"

using namespace steer;

namespace {

// Brute-force partial trace straight from the index definition.
ComplexMatrix oracle_partial_trace(const ComplexMatrix& m, std::size_t da, std::size_t db, bool keep_a) {
  const auto A = static_cast<Eigen::Index>(da);
  const auto B = static_cast<Eigen::Index>(db);
  if (keep_a) {
    ComplexMatrix out = ComplexMatrix::Zero(A, A);
    for (Eigen::Index i = 0; i < A; ++i)
      for (Eigen::Index j = 0; j < A; ++j)
        for (Eigen::Index k = 0; k < B; ++k) out(i, j) += m(i * B + k, j * B + k);
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(B, B);
  for (Eigen::Index i = 0; i < B; ++i)
    for (Eigen::Index j = 0; j < B; ++j)
      for (Eigen::Index k = 0; k < A; ++k) out(i, j) += m(k * B + i, k * B + j);
  return out;
}

}  // namespace

TEST_CASE("Hermitian construction accepts roundoff and rejects real asymmetry") {
  ComplexMatrix m(2, 2);
  m << 1.0, Complex(0.5, 0.25), Complex(0.5, -0.25), 2.0;
  CHECK_NOTHROW(HermitianOperator{m});
  ComplexMatrix near = m;
  near(0, 1) += 1e-14;
  const HermitianOperator h(near);
  CHECK(h(0, 1) == std::conj(h(1, 0)));
  ComplexMatrix bad = m;
  bad(0, 1) = 0.3;
  CHECK_THROWS_AS(HermitianOperator{bad}, Error);
  ComplexMatrix nan = m;
  nan(1, 1) = std::nan("");
  CHECK_THROWS_AS(HermitianOperator{nan}, Error);
  CHECK_THROWS_AS(HermitianOperator{ComplexMatrix(2, 3)}, Error);
}

TEST_CASE("eigenvalues agree with the complex Schur oracle") {
  Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t d = 1 + rng.index(8);
    const HermitianOperator h = random_hermitian(d, rng);
    const auto e = eig_hermitian(h);
    const auto oracle = testing::oracle_eigenvalues(h.matrix());
    for (std::size_t i = 0; i < d; ++i) CHECK(e.eigenvalues(static_cast<Eigen::Index>(i)) == doctest::Approx(oracle[i]).epsilon(1e-10));
    const ComplexMatrix v = e.eigenvectors;
    CHECK((v.adjoint() * v - ComplexMatrix::Identity(v.cols(), v.cols())).norm() < 1e-12);
    const ComplexMatrix rebuilt = v * e.eigenvalues.cast<Complex>().asDiagonal() * v.adjoint();
    CHECK((rebuilt - h.matrix()).norm() < 1e-12 * (1.0 + h.matrix().norm()));
  }
}

TEST_CASE("eigensolver handles degenerate and diagonal spectra") {
  const double diag[] = {3.0, -1.0, 3.0, 0.0};
  const auto e = eig_hermitian(HermitianOperator::diagonal(diag));
  CHECK(e.eigenvalues(0) == doctest::Approx(-1.0));
  CHECK(e.eigenvalues(3) == doctest::Approx(3.0));
  const auto id = eig_hermitian(HermitianOperator::identity(5));
  for (Eigen::Index i = 0; i < 5; ++i) CHECK(id.eigenvalues(i) == doctest::Approx(1.0));
  CHECK(operator_norm(HermitianOperator::diagonal(diag)) == doctest::Approx(3.0));
}

TEST_CASE("kron and partial trace match the index definitions") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t da = 1 + rng.index(3);
    const std::size_t db = 1 + rng.index(4);
    const auto a = random_hermitian(da, rng);
    const auto b = random_hermitian(db, rng);
    const auto k = kron(a, b);
    for (std::size_t i = 0; i < da * db; ++i)
      for (std::size_t j = 0; j < da * db; ++j)
        CHECK(std::abs(k(i, j) - a(i / db, j / db) * b(i % db, j % db)) < 1e-14);
    const auto h = random_hermitian(da * db, rng);
    CHECK((partial_trace(h, da, db, Subsystem::A).matrix() -
           oracle_partial_trace(h.matrix(), da, db, true)).norm() < 1e-12);
    CHECK((partial_trace(h, da, db, Subsystem::B).matrix() -
           oracle_partial_trace(h.matrix(), da, db, false)).norm() < 1e-12);
  }
}

TEST_CASE("kron respects the dimension cap") {
  CHECK_THROWS_AS(kron(ComplexMatrix::Identity(70, 70), ComplexMatrix::Identity(70, 70)), Error);
}

TEST_CASE("spectral helpers") {
  Rng rng(8);
  const auto h = random_hermitian(4, rng);
  const auto p = psd_part(h);
  CHECK(min_eigenvalue(p) > -1e-12);
  // psd_part(h) - h is the negative part, orthogonal to psd_part(h).
  CHECK(std::abs(hs_inner(p, p - h)) < 1e-10);
  CHECK(is_psd(random_psd(3, 2, rng), 1e-12));
  const auto k = haar_unitary(4, rng);
  CHECK((congruence(k, h).matrix() - k * h.matrix() * k.adjoint()).norm() < 1e-12);
  CHECK(hs_inner(h, HermitianOperator::identity(4)) == doctest::Approx(h.trace()));
}

TEST_CASE("Haar unitaries are unitary and seeded") {
  Rng r1(3);
  Rng r2(3);
  const auto u = haar_unitary(5, r1);
  CHECK((u.adjoint() * u - ComplexMatrix::Identity(5, 5)).norm() < 1e-12);
  CHECK((u - haar_unitary(5, r2)).norm() == 0.0);
}
