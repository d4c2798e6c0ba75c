#pragma once

#include <random>
#include <span>

#include "esdlab/circuit.hpp"

namespace esdlab::testing {

inline ComplexMatrix random_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> dist;
  ComplexMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = Complex(dist(rng), dist(rng));
  return m;
}

inline ComplexMatrix random_unitary(int dim, std::mt19937_64& rng) {
  Eigen::HouseholderQR<ComplexMatrix> qr(random_matrix(dim, dim, rng));
  return qr.householderQ() * ComplexMatrix::Identity(dim, dim);
}

inline ComplexVector random_state(int qubits, std::mt19937_64& rng) {
  ComplexVector psi = random_matrix(1 << qubits, 1, rng).col(0);
  psi /= psi.norm();
  return psi;
}

inline DensityMatrix random_density(int qubits, std::mt19937_64& rng) {
  int dim = 1 << qubits;
  ComplexMatrix g = random_matrix(dim, dim, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix{qubits, (rho + rho.adjoint()) / 2.0};
}

/// Dominant weight lambda plus n_errors uniform error eigenvalues, in a
/// random eigenbasis.
inline DensityMatrix noisy_fixture(int qubits, double lambda, int n_errors,
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

/// Dense embedding of a 2^k operator on the listed qubits into the full
/// 2^nq space.  Qubit 0 is the most significant bit of the global index;
/// the first listed qubit is the most significant bit of the local one.
inline ComplexMatrix embed_full(const ComplexMatrix& op,
                                std::span<const int> qubits, int nq) {
  const int k = static_cast<int>(qubits.size());
  const unsigned long dim = 1ul << nq;
  unsigned long mask = 0;
  for (int q : qubits) mask |= 1ul << (nq - 1 - q);
  auto extract = [&](unsigned long full) {
    unsigned long t = 0;
    for (int i = 0; i < k; ++i)
      t |= ((full >> (nq - 1 - qubits[i])) & 1ul) << (k - 1 - i);
    return t;
  };
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (unsigned long i = 0; i < dim; ++i)
    for (unsigned long j = 0; j < dim; ++j)
      if ((i & ~mask) == (j & ~mask)) out(i, j) = op(extract(i), extract(j));
  return out;
}

}  // namespace esdlab::testing
