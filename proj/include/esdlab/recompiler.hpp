#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "esdlab/circuit.hpp"
#include "esdlab/linalg.hpp"

namespace esdlab {

/// Hardware-native gate vocabulary for controlled-SWAP recompilation.
struct GateSet {
  std::string name;
  std::vector<GateKind> entangling;  // two- and/or three-qubit kinds
  std::vector<GateKind> single;      // single-qubit rotation kinds
};

/// The six supported vocabularies.
const std::vector<GateSet>& gate_sets();
const GateSet& gate_set(std::string_view name);  // throws on unknown name

enum class EquivalenceType { a_full, b_local_su4, c_with_observable };
const char* equivalence_type_name(EquivalenceType type);  // "A", "B", "C"
EquivalenceType parse_equivalence_type(std::string_view s);

/// |tr(u† v)| / d: overlap up to a global phase.
double equivalence_full(const ComplexMatrix& u, const ComplexMatrix& v);

/// max_W |tr(u† (W on pair) v)| / 8 over unitary W acting on the two
/// swapped qubits of a 3-qubit circuit; equals the nuclear norm of the
/// partial trace of v u† over the remaining qubit, divided by 8.
double equivalence_local_su4(const ComplexMatrix& u, const ComplexMatrix& v,
                             std::pair<int, int> swapped_pair = {1, 2});

/// The maximizer W (4x4) of the local-SU(4) overlap.
ComplexMatrix optimal_local_w(const ComplexMatrix& u, const ComplexMatrix& v,
                              std::pair<int, int> swapped_pair = {1, 2});

/// Targets on 3 qubits: control 0, swapped pair (1, 2).  The second form
/// folds the observable in: control on X (applied to the first swapped
/// qubit) times SWAP; other Pauli letters and placements reduce to it by
/// single-qubit basis changes or relabeling.
ComplexMatrix cswap_matrix();
ComplexMatrix cswap_x_matrix();

/// Fixed gate-kind/qubit-placement sequence whose angles are free.
struct TemplateSlot {
  GateKind kind = GateKind::rz;
  std::vector<int> qubits;
};

struct CircuitTemplate {
  std::vector<TemplateSlot> slots;
  std::vector<double> hint;  // optional starting angles for restart 0

  int angle_count() const;
  int entangling_count() const;           // arity >= 2
  int entangling_count(int arity) const;  // exactly this arity
  int single_count() const;
  Circuit instantiate(std::span<const double> angles) const;
  ComplexMatrix matrix(std::span<const double> angles) const;  // 8x8
};

/// Template with `entangling` multi-qubit gates at placements that are
/// known to work well for the vocabulary and equivalence type, dressed
/// generously with single-qubit rotations (full Euler layers).
CircuitTemplate default_template(const GateSet& gs, EquivalenceType type,
                                 int entangling);

struct EquivalenceReport {
  EquivalenceType type = EquivalenceType::a_full;
  std::string gate_set;
  double fidelity = 0.0;  // <= 1 + 1e-12
  int entangling_count = 0;
  int entangling2 = 0;
  int entangling3 = 0;
  int single_count = 0;
  std::vector<double> best_params;
  ComplexMatrix w;  // 4x4 recovered local freedom; identity for type A
  int restarts_used = 0;
};

/// Multi-start coordinate search over the template's angles maximizing
/// the equivalence fidelity for `type` (full overlap for A, local-SU(4)
/// overlap for B and C).  Deterministic under `seed`; restarts are
/// independent and stop early once `stop_at` is reached.  Low fidelity
/// is a valid result, not an error.
EquivalenceReport recompile(const ComplexMatrix& target, const GateSet& gs,
                            EquivalenceType type, const CircuitTemplate& tmpl,
                            int restarts, std::uint64_t seed,
                            double stop_at = 1.0 - 1e-9);

/// Single warm-started coordinate sweep pass from `initial` (no restarts).
/// `initial.size()` must equal `tmpl.angle_count()`.
EquivalenceReport refine(const ComplexMatrix& target, EquivalenceType type,
                         const CircuitTemplate& tmpl,
                         std::span<const double> initial, int max_sweeps = 150);

std::string report_to_json(const EquivalenceReport& report);

/// Reference gate budgets for recompiling an elementary controlled-SWAP
/// (two-qubit / three-qubit entangling gates and single-qubit gates) per
/// vocabulary and equivalence type.
struct GateBudget {
  int two_qubit = 0;
  int three_qubit = 0;
  int singles = 0;
  int entangling() const { return two_qubit + three_qubit; }
};

struct ReferenceCounts {
  std::string gate_set;
  GateBudget a, b, c;
  const GateBudget& budget(EquivalenceType type) const;
};

const std::vector<ReferenceCounts>& reference_counts();

/// One verification row: recompile the type's target at the reference
/// entangling budget and report whether the fidelity threshold was met.
/// Non-achievement is an inconclusive optimization outcome, never fatal.
struct CountCheck {
  std::string gate_set;
  EquivalenceType type = EquivalenceType::a_full;
  GateBudget listed;
  int template_singles = 0;
  double fidelity = 0.0;
  bool achieved = false;  // fidelity >= 1 - 1e-6
  int restarts_used = 0;
};

std::vector<CountCheck> verify_gate_counts(
    std::span<const std::string> gate_set_names, int restarts,
    std::uint64_t seed);

std::string count_checks_to_json(std::span<const CountCheck> checks);

}  // namespace esdlab
