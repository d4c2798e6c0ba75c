#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "esdlab/channels.hpp"

namespace esdlab {

const char* esdlab_version();

/// One table entry: a double or a short label (no commas, quotes or
/// line breaks, so the CSV form needs no escaping).
struct Cell {
  Cell(double v) : numeric(true), number(v) {}
  Cell(int v) : Cell(static_cast<double>(v)) {}
  Cell(long v) : Cell(static_cast<double>(v)) {}
  Cell(std::string s);
  Cell(const char* s) : Cell(std::string(s)) {}

  bool numeric = false;
  double number = 0.0;
  std::string label;

  std::string csv() const;  // %.17g for numbers
};

/// Rectangular sweep output plus run metadata.  The CSV form is a pure
/// function of the rows, so identical configs and seeds give identical
/// bytes; wall time lives only in the summary.
struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  std::uint64_t seed = 0;
  std::string config_hash;
  double wall_seconds = 0.0;

  int column(std::string_view name) const;  // throws on an unknown name
  void add_row(std::vector<Cell> row);      // enforces the width
  double num(int row, std::string_view col) const;
  const std::string& text(int row, std::string_view col) const;
  std::string to_csv() const;
};

struct ObservableSampling {
  int count = 100;
  std::uint64_t seed = 0;  // 0: derived from the master seed
  bool include_identity = false;
};

/// Declarative description of one experiment run.  Shared fields keep one
/// meaning everywhere; a few (eps_grid in particular) are interpreted per
/// experiment as documented on the runners.  Every field has a default,
/// chosen per experiment so an empty config section runs the desk-scale
/// preset of that experiment.
struct ExperimentConfig {
  std::string experiment;

  int sites = 6;   // qubits per register / system size N
  int copies = 4;  // register count n (the sweep maximum where swept)
  int blocks = 5;  // ansatz blocks or Hamiltonian-ansatz layers

  NoiseModel noise;         // state-preparation noise
  NoiseModel engine_noise;  // derangement-circuit noise

  std::vector<double> eps_grid;  // sweep values; meaning set by the runner
  ObservableSampling observables;
  long long shots = 0;  // 0: exact probabilities

  int states = 50;             // random input states (derangement-zne)
  int twirl_samples = 50;      // averaged conjugation pairs (twirl-compare)
  double trace_distance = 0.0; // commuting-perturbation mode when > 0
  int max_degree = 4;          // highest polynomial extrapolation degree
  int zne_degree = 2;          // state-preparation extrapolation fit degree
  bool mismatch_zne = false;   // coherent-mismatch: extrapolation rows
  double depol_fraction = 0.07;  // fixed (non-amplifiable) depolarizing share

  std::uint64_t ring_seed = 11;  // spin-ring on-site energies
  std::uint64_t opt_seed = 1;    // optimizer start
  int vqe_iterations = 1500;

  int nu_blocks = 6;      // coherent-mismatch: depth sweep upper end
  double nu_eps = 1e-3;   // coherent-mismatch: fixed error for the depth sweep

  std::vector<double> precision_grid;  // resource-plan axes
  std::vector<double> lambda_grid;
  std::vector<double> p_max_grid;

  std::uint64_t seed = 1;
  int workers = 1;
  std::string out_dir = ".";

  /// Per-experiment presets (see each runner's documentation).
  static ExperimentConfig defaults(std::string_view experiment);

  /// Strict parse: the object must name a known experiment; unknown keys
  /// are rejected; absent keys take the experiment's defaults.
  static ExperimentConfig from_json(const std::string& text);

  /// Canonical form: every field, sorted keys, resolved defaults.
  std::string to_json() const;

  /// Schema and backend-cap checks; throws std::invalid_argument.
  void validate() const;
};

const std::vector<std::string>& experiment_names();

/// FNV-1a (64 bit, hex) over the canonical config with the output path
/// and worker count removed; neither affects the emitted rows.
std::string config_hash(const ExperimentConfig& cfg);

/// Stable cell seed: hashes the experiment name, the master seed and up
/// to three cell indices.  Independent of platform and worker schedule.
std::uint64_t sub_seed(std::uint64_t master, std::string_view label,
                       std::uint64_t a = 0, std::uint64_t b = 0,
                       std::uint64_t c = 0);

/// Runs tasks 0..jobs-1 on at most `workers` threads.  Each task writes
/// only its own output slot, so results are gathered in index order no
/// matter which thread finishes first.  The first exception is rethrown
/// after all threads join.
void parallel_cells(int jobs, int workers,
                    const std::function<void(int)>& task);

/// Gate-noise preset: single-qubit gates take amplifiable dephasing eps
/// and damping 0.1 eps plus fixed depolarizing depol_fraction * eps;
/// two- and three-qubit gates use the same families at five times the
/// probability.
NoiseModel standard_noise_model(double eps, double depol_fraction = 0.07);

/// Error-vs-bound sweep over copy counts.  Builds one noisy ansatz state
/// (sites, blocks, cfg.noise), samples Pauli observables, and reports
/// both estimator errors against the dominant-eigenvector value for
/// n = 1..copies together with the spectrum bound and the spectrum-free
/// bound.  trace_distance > 0 switches to commuting non-identical copies
/// at that pairwise distance with the effective-sequence bounds.
/// Columns: n, method, observable, error, bound_entropy, bound_general.
ResultTable run_suppression_sweep(const ExperimentConfig& cfg);

/// Noise in the measurement circuit itself, extrapolated away.  For each
/// random pure input state the engine runs at eps_grid multiples of the
/// engine noise; polynomial and rational fits extrapolate the ancilla
/// probability to zero.  Columns: state_id, fit_kind, points,
/// extrapolation_error (fit_kind "none" rows carry the unmitigated gap).
ResultTable run_derangement_zne(const ExperimentConfig& cfg);

/// Spin-ring energy errors versus the expected error count xi.  One
/// noiseless ansatz optimization, then per eps: raw energy, state-noise
/// extrapolation, purification with an ideal engine, purification with a
/// noisy engine (with and without engine-noise extrapolation), the dense
/// two-copy reference and the dominant-eigenvector floor.  Columns: eps,
/// xi, raw_error, zne_error, esd_error, esd_noisy_engine_error,
/// esd_plus_zne_error, spectral_dashed, coherent_floor.
ResultTable run_ground_state(const ExperimentConfig& cfg);

/// Dominant-eigenvector infidelity scaling on a fixed circuit: sweeps the
/// per-gate error (quadratic growth) and the depth at fixed nu_eps
/// (linear growth); optional extrapolation rows when mismatch_zne is set.
/// Columns: sweep, value, nu, c, eta1, eta2, ratio, extrap_error.
ResultTable run_coherent_mismatch(const ExperimentConfig& cfg);

/// Randomized Pauli conjugation of a noisy recompiled engine versus the
/// plain engine.  Per eps point and sampled observable, the two-register
/// purification error is measured with and without averaged conjugation
/// pairs; quantiles of the error ratio F are reported per point.
/// Columns: eps, xi, f_q25, f_median, f_q75.
ResultTable run_twirl_compare(const ExperimentConfig& cfg);

/// Copies/shots planning over the precision, lambda and p_max grids.
/// Columns: precision, lambda, p_max, q, q_n, n, f, shots_a, shots_b.
ResultTable run_resource_plan(const ExperimentConfig& cfg);

/// The resource-plan rows as a JSON report (one object per grid cell).
std::string resource_plan_report(const ExperimentConfig& cfg);

/// Dispatch on cfg.experiment; validates, runs, stamps seed, config hash
/// and wall time.
ResultTable run_experiment(const ExperimentConfig& cfg);

/// Writes <experiment>.csv and <experiment>.summary.json under
/// cfg.out_dir (created when missing) and returns the CSV path.  The
/// summary carries the config hash, versions and wall time; resource-plan
/// summaries embed the JSON report.
std::string write_outputs(const ExperimentConfig& cfg, const ResultTable& t);

}  // namespace esdlab
