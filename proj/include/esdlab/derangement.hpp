#pragma once

#include <utility>
#include <vector>

#include "esdlab/circuit.hpp"

namespace esdlab {

/// A fixed-point-free n-cycle on registers 0..n-1 together with its
/// realization as n-1 transpositions.  The permuted state carries
/// register perm[k]'s original content at position k, so the cyclic
/// shift (variant 0) maps |psi_0,...,psi_{n-1}> to |psi_{n-1},psi_0,...>.
struct DerangementSpec {
  int n = 2;
  std::vector<int> perm;
  std::vector<std::pair<int, int>> transpositions;  // application order
};

/// Number of n-cycles on n registers: (n-1)!.
long cyclic_derangement_count(int n);

/// Deterministic enumeration of the (n-1)! n-cycles; variant 0 is the
/// cyclic shift.
DerangementSpec cyclic_derangement(int n, long variant_index);

/// Star decomposition: n-1 transpositions through register 0 whose
/// left-to-right application realizes `perm`.  Rejects permutations
/// with fixed points or more than one cycle.
std::vector<std::pair<int, int>> transposition_decomposition(
    std::span<const int> perm);

/// Ancilla-controlled derangement measurement circuit over n registers
/// of `sites` qubits each (ancilla at qubit 0).
struct EsdCircuitSpec {
  int n = 2;
  int sites = 1;
  PauliString observable;            // `sites` letters
  long variant = 0;
  bool include_observable = true;    // false measures prob0'
  std::vector<PauliString> twirl;    // empty, or one string per register
};

/// Qubit index of site `site` in register `reg`.
int esd_register_qubit(int reg, int site, int sites);

/// H on the ancilla; N controlled SWAPs per register transposition;
/// optional twirl conjugation; controlled observable on register 0; H.
Circuit build_esd_circuit(const EsdCircuitSpec& spec);

/// Ancilla-0 probability from the full density-matrix simulation of the
/// circuit on |0><0| x rho_1 x ... x rho_n.  Throws when the total
/// qubit count n*sites + 1 exceeds `cap`, directing to prob0_fast.
double prob0_circuit(std::span<const DensityMatrix> copies,
                     const EsdCircuitSpec& spec,
                     const NoiseModel* nm = nullptr, double eps_scale = 1.0,
                     int cap = 13);

/// Noiseless value 1/2 + 1/2 Re tr[sigma rho_1 ... rho_n] (sigma dropped
/// when include_observable is false).  The product follows the given
/// order, which matches the variant-0 circuit for any copies; other
/// variants agree when the copies are identical.
double prob0_fast(std::span<const DensityMatrix> copies,
                  const PauliString& sigma, bool include_observable = true);

/// Identical-copy shorthand: 1/2 + 1/2 tr[rho^n sigma].
double prob0_fast(const DensityMatrix& rho, int n, const PauliString& sigma,
                  bool include_observable = true);

}  // namespace esdlab
