#include <doctest.h>

#include <random>
#include <vector>

#include "esdlab/linalg.hpp"

using namespace esdlab;

namespace {

ComplexMatrix random_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> dist;
  ComplexMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = Complex(dist(rng), dist(rng));
  return m;
}

ComplexMatrix random_hermitian(int dim, std::mt19937_64& rng) {
  ComplexMatrix m = random_matrix(dim, dim, rng);
  return (m + m.adjoint()).eval() / 2.0;
}

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

}  // namespace

TEST_SUITE("linalg") {

TEST_CASE("kron of X and Z matches the known 4x4 matrix") {
  ComplexMatrix expected(4, 4);
  expected << 0, 0, 1, 0,   //
      0, 0, 0, -1,          //
      1, 0, 0, 0,           //
      0, -1, 0, 0;
  CHECK((kron(pauli_x(), pauli_z()) - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("kron dimensions multiply and entries follow the block rule") {
  std::mt19937_64 rng(11);
  ComplexMatrix a = random_matrix(2, 3, rng);
  ComplexMatrix b = random_matrix(3, 2, rng);
  ComplexMatrix k = kron(a, b);
  REQUIRE(k.rows() == 6);
  REQUIRE(k.cols() == 6);
  for (int i = 0; i < k.rows(); ++i)
    for (int j = 0; j < k.cols(); ++j) {
      Complex expected = a(i / 3, j / 2) * b(i % 3, j % 2);
      CHECK(std::abs(k(i, j) - expected) == 0.0);
    }
}

TEST_CASE("variadic kron is the left fold of pairwise kron") {
  std::mt19937_64 rng(12);
  std::vector<ComplexMatrix> f = {random_matrix(2, 2, rng),
                                  random_matrix(3, 3, rng),
                                  random_matrix(2, 2, rng)};
  ComplexMatrix expected = kron(kron(f[0], f[1]), f[2]);
  CHECK((kron(f) - expected).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(kron(std::span<const ComplexMatrix>{}), std::invalid_argument);
}

TEST_CASE("hermitian_eig reconstructs the input and orders descending") {
  std::mt19937_64 rng(13);
  for (int dim : {2, 5, 16}) {
    ComplexMatrix m = random_hermitian(dim, rng);
    Spectrum s = hermitian_eig(m);
    REQUIRE(s.eigenvalues.size() == dim);
    for (int i = 0; i + 1 < dim; ++i)
      CHECK(s.eigenvalues(i) >= s.eigenvalues(i + 1));

    ComplexMatrix rebuilt = s.eigenvectors *
                            s.eigenvalues.asDiagonal().toDenseMatrix().cast<Complex>() *
                            s.eigenvectors.adjoint();
    double scale = m.cwiseAbs().maxCoeff();
    CHECK((rebuilt - m).cwiseAbs().maxCoeff() <= 1e-10 * scale);

    // Residual bound promised by the contract.
    for (int i = 0; i < dim; ++i) {
      ComplexVector v = s.eigenvectors.col(i);
      CHECK((m * v - s.eigenvalues(i) * v).norm() <= 1e-10 * scale);
    }
  }
}

TEST_CASE("hermitian_eig phase-normalizes each eigenvector") {
  std::mt19937_64 rng(14);
  ComplexMatrix m = random_hermitian(8, rng);
  Spectrum s = hermitian_eig(m);
  for (int i = 0; i < 8; ++i) {
    ComplexVector v = s.eigenvectors.col(i);
    int best = 0;
    for (int j = 1; j < 8; ++j)
      if (std::abs(v(j)) > std::abs(v(best))) best = j;
    CHECK(std::abs(v(best).imag()) <= 1e-12);
    CHECK(v(best).real() > 0.0);
  }
}

TEST_CASE("hermitian_eig keeps orthonormal columns on degenerate spectra") {
  ComplexMatrix id = ComplexMatrix::Identity(4, 4);
  Spectrum s = hermitian_eig(id);
  ComplexMatrix gram = s.eigenvectors.adjoint() * s.eigenvectors;
  CHECK((gram - id).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("hermitian_eig rejects non-Hermitian input") {
  std::mt19937_64 rng(15);
  ComplexMatrix m = random_matrix(3, 3, rng);
  m(0, 1) += Complex(0.5, 0.5);
  CHECK_THROWS_AS(hermitian_eig(m), std::invalid_argument);
  CHECK_THROWS_AS(hermitian_eig(random_matrix(2, 3, rng)),
                  std::invalid_argument);
}

TEST_CASE("product_trace agrees with the naive materialized product") {
  std::mt19937_64 rng(16);
  for (int k : {1, 2, 3, 5}) {
    std::vector<ComplexMatrix> f;
    for (int i = 0; i < k; ++i) f.push_back(random_matrix(6, 6, rng));
    ComplexMatrix full = f[0];
    for (int i = 1; i < k; ++i) full = (full * f[i]).eval();
    Complex naive = full.trace();
    Complex got = product_trace(f);
    CHECK(std::abs(got - naive) <= 1e-12 * std::max(1.0, std::abs(naive)));
  }
}

TEST_CASE("product_trace validates shapes") {
  std::mt19937_64 rng(17);
  std::vector<ComplexMatrix> bad = {random_matrix(2, 2, rng),
                                    random_matrix(3, 3, rng)};
  CHECK_THROWS_AS(product_trace(bad), std::invalid_argument);
  CHECK_THROWS_AS(product_trace(std::span<const ComplexMatrix>{}),
                  std::invalid_argument);
  std::vector<ComplexMatrix> rect = {random_matrix(2, 3, rng)};
  CHECK_THROWS_AS(product_trace(rect), std::invalid_argument);
}

}  // TEST_SUITE
