#include "esdlab/state.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace esdlab {

// ------------------------------------------------------------ DensityMatrix

DensityMatrix DensityMatrix::checked(int qubits, ComplexMatrix m, double tol) {
  require(qubits >= 1, "DensityMatrix: need at least one qubit");
  const int dim = 1 << qubits;
  require(m.rows() == dim && m.cols() == dim,
          "DensityMatrix: matrix dimension does not match qubit count");
  require(std::abs(m.trace() - Complex(1.0)) <= tol,
          "DensityMatrix: trace must be 1");
  require((m - m.adjoint()).cwiseAbs().maxCoeff() <= tol,
          "DensityMatrix: matrix must be Hermitian");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m,
                                                      Eigen::EigenvaluesOnly);
  require(solver.eigenvalues().minCoeff() >= -tol,
          "DensityMatrix: matrix must be positive semidefinite");
  return DensityMatrix{qubits, std::move(m)};
}

DensityMatrix DensityMatrix::pure(int qubits, const ComplexVector& psi,
                                  double tol) {
  require(qubits >= 1, "DensityMatrix: need at least one qubit");
  const int dim = 1 << qubits;
  require(psi.size() == dim, "DensityMatrix::pure: wrong vector length");
  require(std::abs(psi.norm() - 1.0) <= tol,
          "DensityMatrix::pure: state vector must be normalized");
  return DensityMatrix{qubits, psi * psi.adjoint()};
}

DensityMatrix DensityMatrix::maximally_mixed(int qubits) {
  require(qubits >= 1, "DensityMatrix: need at least one qubit");
  const int dim = 1 << qubits;
  return DensityMatrix{qubits,
                       ComplexMatrix::Identity(dim, dim) / double(dim)};
}

// -------------------------------------------------------------- PauliString

PauliString::PauliString(std::string letters) : letters_(std::move(letters)) {
  require(!letters_.empty(), "PauliString: empty string");
  for (char c : letters_)
    require(c == 'I' || c == 'X' || c == 'Y' || c == 'Z',
            "PauliString: letters must be one of I, X, Y, Z");
}

PauliString PauliString::identity(int qubits) {
  require(qubits >= 1, "PauliString: need at least one qubit");
  return PauliString(std::string(qubits, 'I'));
}

bool PauliString::is_identity() const {
  return letters_.find_first_not_of('I') == std::string::npos;
}

int PauliString::weight() const {
  int w = 0;
  for (char c : letters_) w += (c != 'I');
  return w;
}

const ComplexMatrix& PauliString::letter_matrix(char letter) {
  static const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
  static const ComplexMatrix x = [] {
    ComplexMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
  }();
  static const ComplexMatrix y = [] {
    ComplexMatrix m(2, 2);
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    return m;
  }();
  static const ComplexMatrix z = [] {
    ComplexMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
  }();
  switch (letter) {
    case 'I': return id;
    case 'X': return x;
    case 'Y': return y;
    case 'Z': return z;
    default: throw std::invalid_argument("PauliString: unknown letter");
  }
}

ComplexMatrix PauliString::matrix() const {
  ComplexMatrix out = letter_matrix(letters_[0]);
  for (size_t i = 1; i < letters_.size(); ++i)
    out = kron(out, letter_matrix(letters_[i]));
  return out;
}

unsigned long PauliString::flip_mask() const {
  unsigned long mask = 0;
  const int n = qubits();
  for (int q = 0; q < n; ++q)
    if (letters_[q] == 'X' || letters_[q] == 'Y')
      mask |= 1ul << (n - 1 - q);  // qubit 0 is the most significant bit
  return mask;
}

Complex PauliString::phase(unsigned long basis_index) const {
  Complex phase = 1.0;
  const int n = qubits();
  for (int q = 0; q < n; ++q) {
    const bool bit = (basis_index >> (n - 1 - q)) & 1ul;
    switch (letters_[q]) {
      case 'Y': phase *= bit ? Complex(0, -1) : Complex(0, 1); break;
      case 'Z': phase *= bit ? -1.0 : 1.0; break;
      default: break;
    }
  }
  return phase;
}

PauliString random_pauli(int qubits, std::mt19937_64& rng,
                         bool include_identity) {
  require(qubits >= 1, "random_pauli: need at least one qubit");
  static constexpr char alphabet[] = {'I', 'X', 'Y', 'Z'};
  while (true) {
    std::string s(qubits, 'I');
    for (char& c : s) c = alphabet[rng() % 4];
    PauliString p(std::move(s));
    if (include_identity || !p.is_identity()) return p;
  }
}

// ------------------------------------------------------------ ObservableSum

int ObservableSum::qubits() const {
  require(!terms.empty(), "ObservableSum: no terms");
  return terms.front().second.qubits();
}

ComplexMatrix ObservableSum::matrix() const {
  const int dim = 1 << qubits();
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (const auto& [coeff, pauli] : terms) out += coeff * pauli.matrix();
  return out;
}

ObservableSum ObservableSum::parse(std::string_view text) {
  ObservableSum out;
  std::istringstream stream{std::string(text)};
  std::string line;
  while (std::getline(stream, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    std::istringstream fields(line);
    double coeff = 0.0;
    std::string letters;
    if (!(fields >> coeff)) {
      fields.clear();
      std::string junk;
      require(!(fields >> junk), "ObservableSum: bad coefficient in '" + line +
                                     "'");
      continue;  // blank or comment-only line
    }
    require(static_cast<bool>(fields >> letters),
            "ObservableSum: missing Pauli string in '" + line + "'");
    out.terms.emplace_back(coeff, PauliString(letters));
    require(out.terms.back().second.qubits() ==
                out.terms.front().second.qubits(),
            "ObservableSum: inconsistent qubit counts");
  }
  require(!out.terms.empty(), "ObservableSum: no terms parsed");
  return out;
}

std::string ObservableSum::format() const {
  std::string out;
  char buf[64];
  for (const auto& [coeff, pauli] : terms) {
    std::snprintf(buf, sizeof buf, "%.17g", coeff);
    out += buf;
    out += '\t';
    out += pauli.str();
    out += '\n';
  }
  return out;
}

// ------------------------------------------------------------ spectral data

double SpectralData::purity_power(int n) const {
  require(n >= 1, "purity_power: order must be >= 1");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i)
    sum += std::pow(eigenvalues(i), n);
  return sum;
}

double renyi_entropy(std::span<const double> p, double order) {
  const bool infinite = std::isinf(order) && order > 0;
  require(infinite || order >= 2.0,
          "renyi_entropy: order must be >= 2 or infinity");
  if (p.empty()) return std::numeric_limits<double>::infinity();
  double sum = 0.0, max = 0.0;
  for (double pk : p) {
    require(pk >= -1e-12, "renyi_entropy: negative probability");
    sum += pk;
    max = std::max(max, pk);
  }
  require(std::abs(sum - 1.0) <= 1e-6,
          "renyi_entropy: distribution must be normalized");
  if (infinite) return -std::log(max);
  double power_sum = 0.0;
  for (double pk : p) power_sum += std::pow(std::max(pk, 0.0), order);
  return std::log(power_sum) / (1.0 - order);
}

SpectralData spectral_data(const DensityMatrix& rho, double cutoff,
                           double dominance_tol) {
  Spectrum s = hermitian_eig(rho.mat);
  const Eigen::Index dim = s.eigenvalues.size();

  SpectralData sd;
  sd.eigenvalues = s.eigenvalues;
  sd.lambda = s.eigenvalues(0);
  sd.dominant = s.eigenvectors.col(0);
  sd.degenerate =
      dim > 1 && s.eigenvalues(0) - s.eigenvalues(1) <= dominance_tol;

  // Error branch: remaining eigenvalues above the cutoff, renormalized.
  std::vector<Eigen::Index> keep;
  double tail = 0.0;
  for (Eigen::Index i = 1; i < dim; ++i)
    if (s.eigenvalues(i) > cutoff) {
      keep.push_back(i);
      tail += s.eigenvalues(i);
    }
  sd.p.reserve(keep.size());
  sd.error_vectors.resize(dim, static_cast<Eigen::Index>(keep.size()));
  for (size_t k = 0; k < keep.size(); ++k) {
    sd.p.push_back(s.eigenvalues(keep[k]) / tail);
    sd.error_vectors.col(static_cast<Eigen::Index>(k)) =
        s.eigenvectors.col(keep[k]);
  }

  sd.dominant_ok = !sd.degenerate &&
                   (keep.empty() || sd.lambda > s.eigenvalues(keep.front()));

  for (int n = 2; n <= 6; ++n) sd.renyi[n] = renyi_entropy(sd.p, n);
  sd.renyi_inf =
      renyi_entropy(sd.p, std::numeric_limits<double>::infinity());
  return sd;
}

// ------------------------------------------------------------- expectation

double expectation(const DensityMatrix& rho, const PauliString& obs) {
  require(obs.qubits() == rho.qubits,
          "expectation: observable qubit count does not match state");
  const unsigned long flip = obs.flip_mask();
  const unsigned long dim = 1ul << rho.qubits;
  Complex sum = 0.0;
  // tr[rho P] only touches one entry of rho per column of P.
  for (unsigned long j = 0; j < dim; ++j)
    sum += obs.phase(j) * rho.mat(j, j ^ flip);
  return sum.real();
}

double expectation(const DensityMatrix& rho, const ObservableSum& obs) {
  double sum = 0.0;
  for (const auto& [coeff, pauli] : obs.terms)
    sum += coeff * expectation(rho, pauli);
  return sum;
}

double coherent_mismatch(const ComplexVector& ideal,
                         const ComplexVector& dominant) {
  require(ideal.size() == dominant.size(),
          "coherent_mismatch: vector lengths differ");
  require(std::abs(ideal.norm() - 1.0) <= 1e-8 &&
              std::abs(dominant.norm() - 1.0) <= 1e-8,
          "coherent_mismatch: states must be normalized");
  const double overlap = std::norm(ideal.dot(dominant));
  return std::clamp(1.0 - overlap, 0.0, 1.0);
}

}  // namespace esdlab
