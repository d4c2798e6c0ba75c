#pragma once

#include <span>

#include "esdlab/common.hpp"

namespace esdlab {

/// Eigendecomposition of a Hermitian matrix.
///
/// `eigenvalues` is sorted descending and `eigenvectors` holds the matching
/// eigenvectors as columns.  Each column is phase-normalized so that its
/// largest-magnitude entry is real and positive; on a magnitude tie the
/// entry with the lowest index wins.
struct Spectrum {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;
};

/// Kronecker product a ⊗ b (dimensions multiply).
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Left-to-right Kronecker product of all factors.  At least one factor.
ComplexMatrix kron(std::span<const ComplexMatrix> factors);

/// Diagonalizes `m`, which must be square and Hermitian within `tol`
/// (max-norm of m - m†).
Spectrum hermitian_eig(const ComplexMatrix& m, double tol = 1e-10);

/// tr[m1 m2 ... mk] for square same-dimension factors, k >= 1.
///
/// The product of the first k-1 factors is accumulated one factor at a
/// time; the trailing factor is contracted entry-wise so the full product
/// is never materialized.
Complex product_trace(std::span<const ComplexMatrix> factors);

}  // namespace esdlab
