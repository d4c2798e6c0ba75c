#pragma once

#include <vector>

#include "esdlab/state.hpp"

namespace esdlab {

enum class ChannelFamily { generic, depolarizing, dephasing, damping };

/// Completely positive trace-preserving map on `arity` qubits given by
/// Kraus operators.  Construct through `make`, which demands the
/// completeness relation sum K†K = Id within 1e-10.
struct KrausChannel {
  int arity = 1;
  std::vector<ComplexMatrix> ops;
  ChannelFamily family = ChannelFamily::generic;
  double prob = 0.0;  // family parameter; 0 for generic channels

  static KrausChannel make(int arity, std::vector<ComplexMatrix> ops,
                           ChannelFamily family = ChannelFamily::generic,
                           double prob = 0.0);

  /// S = sum_m K_m ⊗ conj(K_m), acting on vec(block) with the row index
  /// composite (r, s) -> r * 2^arity + s.  Built on first use.
  const ComplexMatrix& superoperator() const;

 private:
  mutable ComplexMatrix superop_;
};

/// (1-p) rho + p Id/2^k ⊗ tr_k[rho]: uniform Pauli Kraus set where the
/// identity carries weight 1 - p (4^k - 1) / 4^k and every other Pauli
/// string p / 4^k.  k in 1..3.
KrausChannel depolarizing_channel(int qubits, double p);

/// Two Kraus operators sqrt(1-p) Id and sqrt(p) Z.
KrausChannel dephasing_channel(double p);

/// Standard amplitude damping towards |0>.
KrausChannel damping_channel(double p);

enum class GateClass { one_qubit, two_qubit, three_qubit };

GateClass gate_class_for_arity(int arity);

/// One noise event attached after each gate of a class.  Depolarizing
/// entries act jointly on all the gate's qubits; dephasing and damping
/// act independently on each of them.
struct NoiseEntry {
  ChannelFamily family = ChannelFamily::depolarizing;
  double prob = 0.0;          // base probability
  bool amplifiable = true;    // responds to the eps_scale multiplier
};

struct NoiseModel {
  std::vector<NoiseEntry> one_qubit;
  std::vector<NoiseEntry> two_qubit;
  std::vector<NoiseEntry> three_qubit;

  bool empty() const {
    return one_qubit.empty() && two_qubit.empty() && three_qubit.empty();
  }
  const std::vector<NoiseEntry>& entries(GateClass c) const;
  std::vector<NoiseEntry>& entries(GateClass c);
};

/// Effective probability of one entry under a noise-scale multiplier.
double effective_prob(const NoiseEntry& entry, double eps_scale);

/// JSON form: {"one_qubit": [{"family": "dephasing", "prob": 1e-3,
/// "amplifiable": true}, ...], "two_qubit": [...], "three_qubit": [...]}.
NoiseModel noise_model_from_json(const std::string& text);
std::string noise_model_to_json(const NoiseModel& nm);

}  // namespace esdlab
