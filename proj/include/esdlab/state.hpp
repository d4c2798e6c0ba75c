#pragma once

#include <map>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "esdlab/linalg.hpp"

namespace esdlab {

/// Density operator on `qubits` qubits; `mat` is 2^qubits square.
/// Qubit 0 is the leftmost tensor factor (most significant bit of the
/// basis index), matching the text form of PauliString.
struct DensityMatrix {
  int qubits = 0;
  ComplexMatrix mat;

  int dim() const { return 1 << qubits; }

  /// Validating factory: checks shape, unit trace, Hermiticity and
  /// positive semidefiniteness (all within `tol`).
  static DensityMatrix checked(int qubits, ComplexMatrix m, double tol = 1e-10);

  /// |psi><psi| from a normalized state vector.
  static DensityMatrix pure(int qubits, const ComplexVector& psi,
                            double tol = 1e-10);

  /// Maximally mixed state Id / 2^qubits.
  static DensityMatrix maximally_mixed(int qubits);
};

/// Tensor product of single-qubit Paulis, e.g. "XIZY"; the first letter
/// acts on qubit 0.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(std::string letters);

  static PauliString identity(int qubits);

  const std::string& str() const { return letters_; }
  int qubits() const { return static_cast<int>(letters_.size()); }
  bool is_identity() const;
  int weight() const;  // number of non-identity letters

  /// Dense 2^n matrix (kron of the letters, left to right).
  ComplexMatrix matrix() const;

  /// Action on basis states: P|j> = phase(j) |j ^ flip_mask()>.
  unsigned long flip_mask() const;
  Complex phase(unsigned long basis_index) const;

  static const ComplexMatrix& letter_matrix(char letter);

  bool operator==(const PauliString& other) const = default;

 private:
  std::string letters_;
};

/// Uniform random Pauli string; identity excluded unless requested.
PauliString random_pauli(int qubits, std::mt19937_64& rng,
                         bool include_identity = false);

/// Real-weighted sum of Pauli strings.  Text form: one term per line,
/// "coefficient<TAB>string"; '#' starts a comment.
struct ObservableSum {
  std::vector<std::pair<double, PauliString>> terms;

  int qubits() const;
  ComplexMatrix matrix() const;

  static ObservableSum parse(std::string_view text);
  std::string format() const;
};

/// Spectral decomposition of a noisy state: dominant weight lambda with
/// eigenvector |psi1>, and the normalized error distribution p over the
/// remaining eigenvectors.
struct SpectralData {
  double lambda = 0.0;
  ComplexVector dominant;
  std::vector<double> p;          // normalized, descending
  ComplexMatrix error_vectors;    // columns aligned with p
  RealVector eigenvalues;         // all eigenvalues of rho, descending
  bool dominant_ok = false;       // strict dominance lambda > (1-lambda) p_k
  bool degenerate = false;        // top eigenvalue tied within tolerance
  std::map<int, double> renyi;    // H_n of p for n = 2..6
  double renyi_inf = 0.0;         // -ln p_max

  double p_max() const { return p.empty() ? 0.0 : p.front(); }
  double purity_power(int n) const;  // tr[rho^n]
};

/// Eigenvalues below `cutoff` are dropped from the error distribution;
/// `dominance_tol` controls the degeneracy flag on the top eigenvalue.
SpectralData spectral_data(const DensityMatrix& rho, double cutoff = 1e-12,
                           double dominance_tol = 1e-10);

/// Renyi entropy H_n(p) = ln(sum p_k^n) / (1 - n) for order >= 2;
/// pass infinity for H_inf = -ln max(p).  Empty p yields +infinity.
double renyi_entropy(std::span<const double> p, double order);

double expectation(const DensityMatrix& rho, const PauliString& obs);
double expectation(const DensityMatrix& rho, const ObservableSum& obs);

/// c = 1 - |<ideal|dominant>|^2 for normalized state vectors.
double coherent_mismatch(const ComplexVector& ideal,
                         const ComplexVector& dominant);

}  // namespace esdlab
