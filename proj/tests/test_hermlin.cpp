#include <cmath>
#include <random>

#include "doctest.h"
#include "povmsim/errors.hpp"
#include "povmsim/fixtures.hpp"
#include "povmsim/hermlin.hpp"

using namespace povmsim;

namespace {

HermitianOperator random_hermitian(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix m(d, d);
  for (int r = 0; r < d; ++r) {
    m(r, r) = Complex(g(rng), 0.0);
    for (int c = r + 1; c < d; ++c) {
      m(r, c) = Complex(g(rng), g(rng));
      m(c, r) = std::conj(m(r, c));
    }
  }
  return HermitianOperator(std::move(m));
}

ComplexMatrix reconstruct(const EigenDecomposition& e) {
  const int n = e.eigenvectors.rows();
  ComplexMatrix m(n, n);
  for (int k = 0; k < n; ++k)
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        m(r, c) += e.eigenvalues[k] * e.eigenvectors(r, k) * std::conj(e.eigenvectors(c, k));
  return m;
}

}  // namespace

TEST_CASE("eig_hermitian: identity and diagonal cases") {
  const auto id3 = eig_hermitian(HermitianOperator::identity(3));
  for (double v : id3.eigenvalues) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));

  const auto sz = eig_hermitian(fixtures::pauli_z());
  CHECK(sz.eigenvalues[0] == doctest::Approx(1.0));
  CHECK(sz.eigenvalues[1] == doctest::Approx(-1.0));
  CHECK(std::abs(sz.eigenvectors(0, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(sz.eigenvectors(1, 1)) == doctest::Approx(1.0));
}

TEST_CASE("eig_hermitian: rank-one Bloch effect has spectrum {1/2, 0}") {
  // (1/4)(I + n.sigma) for unit n; the characteristic polynomial of
  // aI + v.sigma has roots a +- |v|, so the spectrum is {1/2, 0}.
  const double n[3] = {1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0), -1.0 / std::sqrt(3.0)};
  const auto eff = fixtures::qubit_effect(0.25, 0.25 * n[0], 0.25 * n[1], 0.25 * n[2]);
  const double alpha = 0.25;
  const double blochlen = 0.25 * std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
  const auto eig = eig_hermitian(eff);
  CHECK(eig.eigenvalues[0] == doctest::Approx(alpha + blochlen).epsilon(1e-12));
  CHECK(eig.eigenvalues[1] == doctest::Approx(alpha - blochlen).epsilon(1e-12));
  CHECK(eig.eigenvalues[0] == doctest::Approx(0.5));
  CHECK(eig.eigenvalues[1] == doctest::Approx(0.0));
}

TEST_CASE("eig_hermitian: reconstruction and orthonormality on random inputs") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 15);
    const auto a = random_hermitian(d, rng);
    const auto e = eig_hermitian(a);
    ComplexMatrix diff = reconstruct(e);
    diff -= a.matrix();
    CHECK(diff.max_abs() <= 1e-10);
    ComplexMatrix gram = e.eigenvectors.adjoint() * e.eigenvectors;
    gram -= ComplexMatrix::identity(d);
    CHECK(gram.max_abs() <= 1e-10);
    for (int k = 0; k + 1 < d; ++k) CHECK(e.eigenvalues[k] >= e.eigenvalues[k + 1]);
  }
}

TEST_CASE("non-hermitian input is rejected") {
  ComplexMatrix m(2, 2);
  m(0, 1) = Complex(1.0, 0.0);
  m(1, 0) = Complex(0.5, 0.0);
  CHECK_THROWS_AS(HermitianOperator{std::move(m)}, NonHermitianInput);
}

TEST_CASE("is_psd") {
  CHECK(is_psd(HermitianOperator::identity(4), 1e-9));
  CHECK_FALSE(is_psd(fixtures::pauli_z(), 1e-9));
  const double s = 1.0 / std::sqrt(3.0);
  CHECK(is_psd(fixtures::qubit_effect(0.25, 0.25 * s, 0.25 * s, 0.25 * s), 1e-9));
}

TEST_CASE("trace inner product of Hermitian pairs is real") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 5);
    const auto a = random_hermitian(d, rng);
    const auto b = random_hermitian(d, rng);
    const Complex t = (a.matrix() * b.matrix()).trace();
    CHECK(std::abs(t.imag()) <= 1e-12 * std::max(1.0, std::abs(t.real())));
  }
}

TEST_CASE("complete_to_unitary: basic cases") {
  // first column e0 in C^2
  ComplexMatrix col(2, 1);
  col(0, 0) = 1.0;
  const auto u = complete_to_unitary(col);
  CHECK(u.rows() == 2);
  CHECK(std::abs(u(0, 0) - Complex(1.0, 0.0)) <= 1e-12);
  ComplexMatrix gram = u.adjoint() * u;
  gram -= ComplexMatrix::identity(2);
  CHECK(gram.max_abs() <= 1e-10);

  // full orthonormal input returned unchanged
  std::mt19937_64 rng(3);
  const ComplexMatrix v = fixtures::random_unitary(4, rng);
  const auto full = complete_to_unitary(v);
  ComplexMatrix diff = full;
  diff -= v;
  CHECK(diff.max_abs() <= 1e-12);
}

TEST_CASE("complete_to_unitary: 4x2 block completes to a unitary") {
  // Two orthonormal columns resembling a dilation submatrix.
  ComplexMatrix cols(4, 2);
  cols(0, 0) = Complex(0.5, 0.0);
  cols(1, 0) = Complex(0.5, 0.0);
  cols(2, 0) = Complex(0.5, 0.0);
  cols(3, 0) = Complex(0.5, 0.0);
  cols(0, 1) = Complex(0.5, 0.0);
  cols(1, 1) = Complex(-0.5, 0.0);
  cols(2, 1) = Complex(0.5, 0.0);
  cols(3, 1) = Complex(-0.5, 0.0);
  const auto u = complete_to_unitary(cols);
  ComplexMatrix gram = u.adjoint() * u;
  gram -= ComplexMatrix::identity(4);
  CHECK(gram.max_abs() <= 1e-10);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 2; ++c) CHECK(std::abs(u(r, c) - cols(r, c)) <= 1e-12);
}

TEST_CASE("complete_to_unitary rejects non-orthonormal input") {
  ComplexMatrix col(3, 1);
  col(0, 0) = Complex(0.7, 0.0);
  CHECK_THROWS_AS(complete_to_unitary(col), ColumnsNotOrthonormal);
}

TEST_CASE("complete_to_unitary: 1000 random seeds, n <= 16") {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 16);
    const int k = 1 + static_cast<int>(rng() % n);
    const ComplexMatrix full = fixtures::random_unitary(n, rng);
    ComplexMatrix cols(n, k);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < k; ++c) cols(r, c) = full(r, c);
    const auto u = complete_to_unitary(cols);
    ComplexMatrix gram = u.adjoint() * u;
    gram -= ComplexMatrix::identity(n);
    CHECK(gram.max_abs() <= 1e-10);
    ComplexMatrix gram2 = u * u.adjoint();
    gram2 -= ComplexMatrix::identity(n);
    CHECK(gram2.max_abs() <= 1e-10);
  }
}

TEST_CASE("householder_unitary maps e0 to phi") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 6);
    const auto phi = fixtures::random_pure_state(d, rng);
    const auto v = householder_unitary(phi);
    for (int r = 0; r < d; ++r) CHECK(std::abs(v(r, 0) - phi[r]) <= 1e-12);
    ComplexMatrix gram = v.adjoint() * v;
    gram -= ComplexMatrix::identity(d);
    CHECK(gram.max_abs() <= 1e-11);
  }
}
