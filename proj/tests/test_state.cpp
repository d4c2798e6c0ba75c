#include <doctest.h>

#include <cmath>
#include <random>

#include "esdlab/state.hpp"

using namespace esdlab;

namespace {

ComplexMatrix random_unitary(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> dist;
  ComplexMatrix m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = Complex(dist(rng), dist(rng));
  Eigen::HouseholderQR<ComplexMatrix> qr(m);
  return qr.householderQ() * ComplexMatrix::Identity(dim, dim);
}

// lambda on the first basis vector plus a uniform error tail, conjugated by
// a random unitary so the eigenbasis is non-trivial.
DensityMatrix noisy_fixture(int qubits, double lambda, int n_errors,
                            std::mt19937_64& rng) {
  int dim = 1 << qubits;
  RealVector diag = RealVector::Zero(dim);
  diag(0) = lambda;
  for (int k = 1; k <= n_errors; ++k) diag(k) = (1.0 - lambda) / n_errors;
  ComplexMatrix q = random_unitary(dim, rng);
  ComplexMatrix rho =
      q * diag.cast<Complex>().asDiagonal().toDenseMatrix() * q.adjoint();
  return DensityMatrix::checked(qubits, rho);
}

}  // namespace

TEST_SUITE("state") {

TEST_CASE("pauli strings parse, print, and reject junk") {
  PauliString p("XIZY");
  CHECK(p.qubits() == 4);
  CHECK(p.weight() == 3);
  CHECK_FALSE(p.is_identity());
  CHECK(PauliString("III").is_identity());
  CHECK(PauliString::identity(3).str() == "III");
  CHECK_THROWS_AS(PauliString("XQ"), std::invalid_argument);
  CHECK_THROWS_AS(PauliString(""), std::invalid_argument);
}

TEST_CASE("pauli string matrix is the kron of its letters") {
  PauliString p("XZY");
  std::vector<ComplexMatrix> letters = {PauliString::letter_matrix('X'),
                                        PauliString::letter_matrix('Z'),
                                        PauliString::letter_matrix('Y')};
  CHECK((p.matrix() - kron(letters)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("pauli flip mask and phase reproduce matrix columns") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    PauliString p = random_pauli(3, rng, true);
    ComplexMatrix m = p.matrix();
    for (unsigned long j = 0; j < 8; ++j) {
      unsigned long target = j ^ p.flip_mask();
      for (unsigned long i = 0; i < 8; ++i) {
        Complex expected = (i == target) ? p.phase(j) : Complex(0);
        CHECK(std::abs(m(i, j) - expected) == 0.0);
      }
    }
  }
}

TEST_CASE("random_pauli excludes identity unless asked") {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 200; ++i) {
    CHECK_FALSE(random_pauli(2, rng).is_identity());
  }
  bool saw_identity = false;
  for (int i = 0; i < 200; ++i)
    saw_identity |= random_pauli(1, rng, true).is_identity();
  CHECK(saw_identity);
}

TEST_CASE("observable sums parse and round-trip the text form") {
  ObservableSum h = ObservableSum::parse(
      "# ring couplings\n"
      "0.5\tXX\n"
      "-0.25\tZI\n");
  REQUIRE(h.terms.size() == 2);
  CHECK(h.qubits() == 2);
  CHECK(h.terms[0].first == 0.5);
  CHECK(h.terms[1].second.str() == "ZI");

  ObservableSum again = ObservableSum::parse(h.format());
  REQUIRE(again.terms.size() == 2);
  CHECK(again.terms[0].first == h.terms[0].first);
  CHECK(again.terms[1].second == h.terms[1].second);

  ComplexMatrix expected = 0.5 * PauliString("XX").matrix() -
                           0.25 * PauliString("ZI").matrix();
  CHECK((h.matrix() - expected).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(ObservableSum::parse("0.5\tXX\n1.0\tZZZ\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS(ObservableSum::parse("abc\tXX\n"), std::invalid_argument);
}

TEST_CASE("density matrix factories validate their input") {
  CHECK_NOTHROW(DensityMatrix::maximally_mixed(2));
  ComplexVector psi(2);
  psi << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  DensityMatrix rho = DensityMatrix::pure(1, psi);
  CHECK(std::abs(rho.mat(0, 1).real() - 0.5) <= 1e-12);

  ComplexMatrix bad_trace = 2.0 * ComplexMatrix::Identity(2, 2);
  CHECK_THROWS_AS(DensityMatrix::checked(1, bad_trace), std::invalid_argument);

  ComplexMatrix negative(2, 2);
  negative << 1.5, 0, 0, -0.5;
  CHECK_THROWS_AS(DensityMatrix::checked(1, negative), std::invalid_argument);

  ComplexMatrix nonherm(2, 2);
  nonherm << 0.5, 0.5, 0, 0.5;
  CHECK_THROWS_AS(DensityMatrix::checked(1, nonherm), std::invalid_argument);

  ComplexVector unnorm(2);
  unnorm << 1.0, 1.0;
  CHECK_THROWS_AS(DensityMatrix::pure(1, unnorm), std::invalid_argument);
}

// A state with dominant weight 0.8 and 100 uniform error vectors: the
// error distribution is uniform 0.01, tr[rho^3] = 0.8^3 + 100 * 0.002^3
// = 0.5120008, and H_3 = -ln(1e-4)/2 = 2 ln 10.
TEST_CASE("spectral data recovers the 0.8 / 100-error reference state") {
  std::mt19937_64 rng(23);
  DensityMatrix rho = noisy_fixture(7, 0.8, 100, rng);
  SpectralData sd = spectral_data(rho);

  CHECK(std::abs(sd.lambda - 0.8) <= 1e-10);
  REQUIRE(sd.p.size() == 100);
  for (double pk : sd.p) CHECK(std::abs(pk - 0.01) <= 1e-10);
  CHECK(sd.dominant_ok);
  CHECK_FALSE(sd.degenerate);

  CHECK(std::abs(sd.purity_power(3) - 0.5120008) <= 1e-10);
  CHECK(std::abs(sd.renyi.at(3) - 2.0 * std::log(10.0)) <= 1e-8);
  CHECK(std::abs(sd.renyi_inf - std::log(100.0)) <= 1e-8);
}

TEST_CASE("spectral data flags missing dominance and degeneracy") {
  ComplexMatrix half = ComplexMatrix::Zero(2, 2);
  half(0, 0) = 0.5;
  half(1, 1) = 0.5;
  SpectralData tied = spectral_data(DensityMatrix::checked(1, half));
  CHECK(tied.degenerate);
  CHECK_FALSE(tied.dominant_ok);

  ComplexMatrix ok = ComplexMatrix::Zero(2, 2);
  ok(0, 0) = 0.75;
  ok(1, 1) = 0.25;
  SpectralData fine = spectral_data(DensityMatrix::checked(1, ok));
  CHECK(fine.dominant_ok);
  CHECK_FALSE(fine.degenerate);
  CHECK(std::abs(fine.lambda - 0.75) <= 1e-12);
  REQUIRE(fine.p.size() == 1);
  CHECK(std::abs(fine.p[0] - 1.0) <= 1e-12);
  CHECK(std::abs(fine.purity_power(2) - (0.75 * 0.75 + 0.25 * 0.25)) <= 1e-12);
}

TEST_CASE("renyi entropies are monotone non-increasing in the order") {
  std::mt19937_64 rng(24);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<double> p(8);
    double norm = 0.0;
    for (double& x : p) {
      x = u(rng);
      norm += x;
    }
    for (double& x : p) x /= norm;

    double inf = renyi_entropy(p, std::numeric_limits<double>::infinity());
    double prev = inf;
    for (int n = 6; n >= 2; --n) {
      double h = renyi_entropy(p, n);
      CHECK(h >= prev - 1e-12);
      prev = h;
    }
  }
}

TEST_CASE("renyi entropy handles uniform, empty, and bad orders") {
  std::vector<double> uniform(25, 1.0 / 25.0);
  for (double order : {2.0, 3.0, 6.0})
    CHECK(std::abs(renyi_entropy(uniform, order) - std::log(25.0)) <= 1e-12);
  CHECK(std::abs(renyi_entropy(uniform,
                               std::numeric_limits<double>::infinity()) -
                 std::log(25.0)) <= 1e-12);

  std::vector<double> two = {0.5, 0.5};
  CHECK(std::abs(renyi_entropy(two, 2.0) - std::log(2.0)) <= 1e-12);

  std::vector<double> empty;
  CHECK(std::isinf(renyi_entropy(empty, 2.0)));
  CHECK_THROWS_AS(renyi_entropy(two, 1.5), std::invalid_argument);
}

TEST_CASE("expectation matches the dense trace") {
  std::mt19937_64 rng(25);
  DensityMatrix rho = noisy_fixture(3, 0.7, 4, rng);
  for (int trial = 0; trial < 20; ++trial) {
    PauliString p = random_pauli(3, rng, true);
    Complex dense = (rho.mat * p.matrix()).trace();
    CHECK(std::abs(dense.imag()) <= 1e-10);
    CHECK(std::abs(expectation(rho, p) - dense.real()) <= 1e-10);
  }

  ObservableSum h = ObservableSum::parse("0.3\tXIZ\n-1.2\tYYI\n0.25\tIII\n");
  Complex dense = (rho.mat * h.matrix()).trace();
  CHECK(std::abs(expectation(rho, h) - dense.real()) <= 1e-10);

  CHECK_THROWS_AS(expectation(rho, PauliString("XX")), std::invalid_argument);
}

TEST_CASE("coherent mismatch is the squared-overlap deficit") {
  ComplexVector e0(2), e1(2), mix(2);
  e0 << 1, 0;
  e1 << 0, 1;
  double c = 0.3;
  mix << std::sqrt(1.0 - c), std::sqrt(c);
  CHECK(coherent_mismatch(e0, e0) <= 1e-15);
  CHECK(std::abs(coherent_mismatch(e0, e1) - 1.0) <= 1e-15);
  CHECK(std::abs(coherent_mismatch(e0, mix) - c) <= 1e-12);

  ComplexVector unnorm(2);
  unnorm << 1, 1;
  CHECK_THROWS_AS(coherent_mismatch(e0, unnorm), std::invalid_argument);
  CHECK_THROWS_AS(coherent_mismatch(e0, ComplexVector(3)),
                  std::invalid_argument);
}

}  // TEST_SUITE
