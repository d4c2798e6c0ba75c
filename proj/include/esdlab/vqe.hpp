#pragma once

#include <cstdint>
#include <vector>

#include "esdlab/circuit.hpp"
#include "esdlab/derangement.hpp"
#include "esdlab/estimator.hpp"
#include "esdlab/zne.hpp"

namespace esdlab {

/// Ring of n spins: on-site Z fields omega_k plus a constant Heisenberg
/// coupling j on nearest-neighbour ring edges (n edges for n >= 3, one
/// for n = 2).
struct SpinRingSpec {
  int n = 6;
  double j = 0.1;
  RealVector omega;  // length n
};

/// The fixed six-site study instance, or freshly drawn on-site energies
/// (uniform in [-1, 1] under `seed`) for other sizes.
SpinRingSpec default_spin_ring(int n = 6, std::uint64_t seed = 1);

/// Sum_k omega_k Z_k + j * Sum_edges (X X + Y Y + Z Z).
ObservableSum build_spin_ring(const SpinRingSpec& spec);

struct GroundState {
  double energy = 0.0;
  ComplexVector state;
};

/// Minimum eigenpair of the dense Hamiltonian (capped at 12 qubits).
GroundState exact_ground_energy(const ObservableSum& h);

/// Alternating-layer variational parameters.
struct VhaParams {
  int layers = 0;
  RealVector beta;   // length layers, on-site evolution angles
  RealVector gamma;  // length layers, coupling evolution angles
};

/// Computational-basis preparation of the on-site ground state (X where
/// omega_k > 0), then per layer the Trotterized coupling evolution (XX,
/// YY, ZZ per ring edge, edges ascending, angle 2 gamma j) followed by an
/// Rz layer (angle 2 beta omega_k).  Entangling count: 3 per edge per
/// layer.
Circuit build_vha(const SpinRingSpec& spec, const VhaParams& params);

/// Noiseless statevector energy of the ansatz.
double vha_energy(const SpinRingSpec& spec, const VhaParams& params);

struct VhaOptimizerConfig {
  int max_iters = 300;
  double initial_step = 0.2;
  double shrink = 0.5;        // backtracking factor
  int max_backtracks = 25;
  double grad_tol = 1e-7;     // stop when the gradient sup-norm drops below
  double fd_step = 1e-5;      // central-difference half-width
  double init_scale = 0.05;   // initial angles uniform in +-init_scale
};

struct VhaResult {
  VhaParams params;
  std::vector<double> trajectory;  // accepted energies; starting value first
  double energy = 0.0;
  bool converged = false;
  int iterations = 0;  // accepted descent steps
};

/// Finite-difference gradient descent with backtracking line search on
/// the noiseless simulator; deterministic under `seed`.
VhaResult optimize_vha(const SpinRingSpec& spec, int layers,
                       const VhaOptimizerConfig& cfg, std::uint64_t seed);

/// Mitigated energy estimation over n copies of a noisy state.
struct EsdEnergyOptions {
  int n = 2;            // copies
  char method = 'A';    // 'A' divides by the measured purity, 'B' by lambda^n
  long variant = 0;     // derangement variant (noisy engine only)
  const NoiseModel* derangement_noise = nullptr;  // null: noiseless engine
  bool zne = false;     // extrapolate derangement noise to zero
  int zne_points = 6;   // grid size over scale factors [1, 2]
  FitKind zne_fit = FitKind::linear;
  int zne_degree = 2;   // for poly fits
  int qubit_cap = 13;   // forwarded to the circuit backend
};

struct EsdEnergyReport {
  double energy = 0.0;    // mitigated estimate
  double raw = 0.0;       // unmitigated tr[H rho]
  double dominant = 0.0;  // dominant-eigenvector energy
  double spectral = 0.0;  // tr[H rho^n] / tr[rho^n]
  double lambda = 0.0;    // dominant eigenvalue (Method B divisor)
  int terms = 0;          // non-identity Pauli terms estimated
};

/// Per Pauli term: derangement-engine estimate (Method A or B); identity
/// terms contribute their coefficient directly.  With `derangement_noise`
/// the engine runs the full noisy circuit; `zne` additionally extrapolates
/// each term's ancilla probabilities to the zero-noise limit.
EsdEnergyReport energy_with_esd(const DensityMatrix& rho,
                                const ObservableSum& h,
                                const EsdEnergyOptions& opt = {});

}  // namespace esdlab
