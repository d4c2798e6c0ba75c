#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "esdlab/channels.hpp"

namespace esdlab {

enum class GateKind {
  // one qubit
  rx, ry, rz, h, x, y, z,
  // two qubits
  xx, yy, zz, pswap, swap_gate, crx, crz,
  // three qubits
  cswap, ccp, xxx,
  // control + Pauli string on the remaining qubits
  cpauli, acpauli,
  // explicit matrix
  unitary,
};

/// Rotation gates use the half-angle convention exp(-i theta/2 G), with
/// G the generating Pauli product (X for Rx, X⊗X for XX, ...).  pSWAP
/// takes two angles: exp(-i t1/2 (XX+YY) - i t2/2 ZZ).  Controlled kinds
/// list the control qubit first.
struct Gate {
  GateKind kind = GateKind::h;
  std::vector<int> qubits;
  std::vector<double> params;
  std::string pauli;     // cpauli/acpauli: one letter per target qubit
  ComplexMatrix custom;  // unitary kind only

  int arity() const { return static_cast<int>(qubits.size()); }
  bool entangling() const { return arity() >= 2; }
  GateClass gate_class() const { return gate_class_for_arity(arity()); }

  /// Dense 2^arity unitary; the first listed qubit is the most
  /// significant bit of the gate's local basis index.
  ComplexMatrix matrix() const;
};

Gate make_gate(GateKind kind, std::vector<int> qubits,
               std::vector<double> params = {});
Gate make_cpauli(bool anti, int control, std::vector<int> targets,
                 std::string letters);
Gate make_unitary(std::vector<int> qubits, ComplexMatrix u,
                  double tol = 1e-10);

const char* gate_kind_name(GateKind kind);
int gate_kind_arity(GateKind kind);   // -1 when variable (CPauli, unitary)
int gate_kind_params(GateKind kind);  // angle count for fixed-arity kinds

/// Gate list over a fixed qubit register.  Text form: one gate per line,
/// `KIND q0[,q1[,q2]] [theta[,theta2]]`; CPauli/aCPauli lines carry their
/// letters as the trailing token; '#' starts a comment.  Explicit-matrix
/// gates have no text form.
struct Circuit {
  int qubits = 0;
  std::vector<Gate> gates;

  Circuit() = default;
  explicit Circuit(int qubits_) : qubits(qubits_) {
    require(qubits_ >= 1, "Circuit: need at least one qubit");
  }

  void push(Gate g);  // validates qubit indices and parameter counts
  int entangling_count() const;

  static Circuit parse(std::string_view text);
  std::string format() const;
};

/// rho <- U rho U† for the gate's unitary on its qubits.
void apply_gate(DensityMatrix& rho, const Gate& g);

/// psi <- U psi; pure-state analogue for noiseless circuits.
void apply_gate_state(ComplexVector& psi, const Gate& g, int qubits);

/// rho <- sum_m K_m rho K_m† on the listed qubits.
void apply_channel(DensityMatrix& rho, const KrausChannel& ch,
                   std::span<const int> qubits);

/// Runs the circuit, attaching the noise model's per-class channels after
/// each gate.  `eps_scale` multiplies every amplifiable entry.
DensityMatrix run_circuit(const DensityMatrix& rho0, const Circuit& c,
                          const NoiseModel* nm = nullptr,
                          double eps_scale = 1.0);

ComplexVector run_circuit_state(const ComplexVector& psi0, const Circuit& c);

/// Sum of effective per-gate error probabilities over the circuit
/// (per-qubit channels count once per qubit they touch).
double circuit_xi(const Circuit& c, const NoiseModel& nm,
                  double eps_scale = 1.0);

/// Hardware-style ansatz: an initial Ry layer, then per block a Ry layer,
/// an Rz layer, and an XX entangler ring.  Every gate takes one angle.
int ansatz_param_count(int qubits, int blocks);
Circuit build_alternating_ansatz(int qubits, int blocks,
                                 std::span<const double> params);
/// Same topology with angles drawn uniformly from [0, 2π).
Circuit build_alternating_ansatz(int qubits, int blocks, std::uint64_t seed);

}  // namespace esdlab
