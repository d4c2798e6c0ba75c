#include "esdlab/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <numeric>
#include <vector>

namespace esdlab {

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexMatrix kron(std::span<const ComplexMatrix> factors) {
  require(!factors.empty(), "kron: at least one factor required");
  ComplexMatrix out = factors[0];
  for (size_t i = 1; i < factors.size(); ++i) out = kron(out, factors[i]);
  return out;
}

Spectrum hermitian_eig(const ComplexMatrix& m, double tol) {
  require(m.rows() == m.cols(), "hermitian_eig: matrix must be square");
  require((m - m.adjoint()).cwiseAbs().maxCoeff() <= tol,
          "hermitian_eig: matrix is not Hermitian within tolerance");

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m);
  require(solver.info() == Eigen::Success, "hermitian_eig: solver failed");

  const Eigen::Index n = m.rows();
  Spectrum s;
  s.eigenvalues.resize(n);
  s.eigenvectors.resize(n, n);
  // Eigen returns ascending order; flip to descending.
  for (Eigen::Index i = 0; i < n; ++i) {
    s.eigenvalues(i) = solver.eigenvalues()(n - 1 - i);
    s.eigenvectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  }

  // Fix the arbitrary global phase of each eigenvector: the
  // largest-magnitude entry (lowest index on ties) becomes real positive.
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index j = 1; j < n; ++j)
      if (std::abs(s.eigenvectors(j, i)) > std::abs(s.eigenvectors(best, i)))
        best = j;
    Complex z = s.eigenvectors(best, i);
    if (std::abs(z) > 0.0) s.eigenvectors.col(i) *= std::conj(z) / std::abs(z);
  }
  return s;
}

Complex product_trace(std::span<const ComplexMatrix> factors) {
  require(!factors.empty(), "product_trace: at least one factor required");
  const Eigen::Index dim = factors[0].rows();
  for (const auto& f : factors)
    require(f.rows() == dim && f.cols() == dim,
            "product_trace: factors must be square with equal dimensions");

  if (factors.size() == 1) return factors[0].trace();

  ComplexMatrix acc = factors[0];
  for (size_t i = 1; i + 1 < factors.size(); ++i) acc = (acc * factors[i]).eval();
  // tr[acc * last] without forming the product.
  const ComplexMatrix& last = factors.back();
  Complex trace = 0.0;
  for (Eigen::Index i = 0; i < dim; ++i)
    trace += (acc.row(i) * last.col(i)).value();
  return trace;
}

}  // namespace esdlab
