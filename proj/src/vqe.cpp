#include "esdlab/vqe.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace esdlab {

namespace {

void check_spec(const SpinRingSpec& spec) {
  require(spec.n >= 2, "SpinRingSpec: need at least two sites");
  require(spec.omega.size() == spec.n,
          "SpinRingSpec: omega length must equal the site count");
  require(spec.omega.allFinite() && std::isfinite(spec.j),
          "SpinRingSpec: parameters must be finite");
}

int ring_edges(int n) { return n >= 3 ? n : 1; }

void check_params(const SpinRingSpec& spec, const VhaParams& params) {
  check_spec(spec);
  require(params.layers >= 0, "VhaParams: negative layer count");
  require(params.beta.size() == params.layers &&
              params.gamma.size() == params.layers,
          "VhaParams: beta/gamma lengths must equal the layer count");
}

std::string pauli_edge(int n, int a, int b, char letter) {
  std::string s(n, 'I');
  s[a] = letter;
  s[b] = letter;
  return s;
}

/// <psi|P|psi> through the string's basis action, O(dim).
double state_expectation(const ComplexVector& psi, const PauliString& p) {
  const unsigned long mask = p.flip_mask();
  Complex acc = 0.0;
  for (long j = 0; j < psi.size(); ++j) {
    unsigned long uj = static_cast<unsigned long>(j);
    acc += std::conj(psi(uj ^ mask)) * p.phase(uj) * psi(j);
  }
  return acc.real();
}

double state_energy(const ComplexVector& psi, const ObservableSum& h) {
  double e = 0.0;
  for (const auto& [coeff, term] : h.terms)
    e += term.is_identity() ? coeff : coeff * state_expectation(psi, term);
  return e;
}

ComplexVector zero_state(int qubits) {
  ComplexVector psi = ComplexVector::Zero(1l << qubits);
  psi(0) = 1.0;
  return psi;
}

}  // namespace

SpinRingSpec default_spin_ring(int n, std::uint64_t seed) {
  require(n >= 2, "default_spin_ring: need at least two sites");
  SpinRingSpec spec;
  spec.n = n;
  spec.j = 0.1;
  spec.omega.resize(n);
  if (n == 6) {
    spec.omega << -0.70983, -0.0517, 0.9065, -0.9265, 0.0950, -0.49597;
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int k = 0; k < n; ++k) spec.omega(k) = dist(rng);
  }
  return spec;
}

ObservableSum build_spin_ring(const SpinRingSpec& spec) {
  check_spec(spec);
  ObservableSum h;
  for (int k = 0; k < spec.n; ++k) {
    std::string s(spec.n, 'I');
    s[k] = 'Z';
    h.terms.emplace_back(spec.omega(k), PauliString(s));
  }
  for (int e = 0; e < ring_edges(spec.n); ++e) {
    int a = e, b = (e + 1) % spec.n;
    for (char letter : {'X', 'Y', 'Z'})
      h.terms.emplace_back(spec.j,
                           PauliString(pauli_edge(spec.n, a, b, letter)));
  }
  return h;
}

GroundState exact_ground_energy(const ObservableSum& h) {
  int nq = h.qubits();
  require(nq >= 1, "exact_ground_energy: empty observable");
  require(nq <= 12, "exact_ground_energy: dense diagonalization capped at "
                    "12 qubits");
  ComplexMatrix dense = h.matrix();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(dense);
  require(es.info() == Eigen::Success,
          "exact_ground_energy: eigensolver failed");
  GroundState gs;
  gs.energy = es.eigenvalues()(0);
  gs.state = es.eigenvectors().col(0);
  return gs;
}

Circuit build_vha(const SpinRingSpec& spec, const VhaParams& params) {
  check_params(spec, params);
  Circuit c(spec.n);
  for (int k = 0; k < spec.n; ++k)
    if (spec.omega(k) > 0.0) c.push(make_gate(GateKind::x, {k}));

  for (int l = 0; l < params.layers; ++l) {
    double theta = 2.0 * params.gamma(l) * spec.j;
    for (int e = 0; e < ring_edges(spec.n); ++e) {
      int a = e, b = (e + 1) % spec.n;
      c.push(make_gate(GateKind::xx, {a, b}, {theta}));
      c.push(make_gate(GateKind::yy, {a, b}, {theta}));
      c.push(make_gate(GateKind::zz, {a, b}, {theta}));
    }
    for (int k = 0; k < spec.n; ++k)
      c.push(make_gate(GateKind::rz, {k}, {2.0 * params.beta(l) *
                                            spec.omega(k)}));
  }
  return c;
}

double vha_energy(const SpinRingSpec& spec, const VhaParams& params) {
  Circuit c = build_vha(spec, params);
  ComplexVector psi = run_circuit_state(zero_state(spec.n), c);
  return state_energy(psi, build_spin_ring(spec));
}

VhaResult optimize_vha(const SpinRingSpec& spec, int layers,
                       const VhaOptimizerConfig& cfg, std::uint64_t seed) {
  check_spec(spec);
  require(layers >= 1, "optimize_vha: need at least one layer");
  require(cfg.max_iters >= 0, "optimize_vha: negative iteration count");
  require(cfg.initial_step > 0 && cfg.shrink > 0 && cfg.shrink < 1,
          "optimize_vha: invalid line-search parameters");
  require(cfg.fd_step > 0, "optimize_vha: finite-difference step must be "
                           "positive");

  const ObservableSum h = build_spin_ring(spec);
  const ComplexVector psi0 = zero_state(spec.n);

  auto energy_at = [&](const RealVector& theta) {
    VhaParams p;
    p.layers = layers;
    p.beta = theta.head(layers);
    p.gamma = theta.tail(layers);
    Circuit c = build_vha(spec, p);
    return state_energy(run_circuit_state(psi0, c), h);
  };

  RealVector theta(2 * layers);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-cfg.init_scale, cfg.init_scale);
  for (long i = 0; i < theta.size(); ++i) theta(i) = dist(rng);

  VhaResult out;
  double energy = energy_at(theta);
  out.trajectory.push_back(energy);

  RealVector prev_theta, prev_grad;
  bool have_prev = false;
  double last_step = cfg.initial_step;
  for (int it = 0; it < cfg.max_iters; ++it) {
    RealVector grad(theta.size());
    for (long i = 0; i < theta.size(); ++i) {
      RealVector up = theta, dn = theta;
      up(i) += cfg.fd_step;
      dn(i) -= cfg.fd_step;
      grad(i) = (energy_at(up) - energy_at(dn)) / (2.0 * cfg.fd_step);
    }
    double gnorm = grad.lpNorm<Eigen::Infinity>();
    if (gnorm <= cfg.grad_tol) {
      out.converged = true;
      break;
    }

    // Barzilai-Borwein trial step where curvature information exists,
    // safeguarded by Armijo backtracking so the trajectory stays monotone
    double step = cfg.initial_step;
    if (have_prev) {
      RealVector s = theta - prev_theta, y = grad - prev_grad;
      double sy = s.dot(y);
      step = sy > 1e-16 ? s.squaredNorm() / sy : last_step * 2.0;
      step = std::clamp(step, 1e-8, 1e3);
    }
    prev_theta = theta;
    prev_grad = grad;
    have_prev = true;

    double g2 = grad.squaredNorm();
    bool accepted = false;
    for (int bt = 0; bt <= cfg.max_backtracks; ++bt) {
      RealVector trial = theta - step * grad;
      double trial_energy = energy_at(trial);
      if (trial_energy <= energy - 1e-4 * step * g2) {
        theta = trial;
        energy = trial_energy;
        out.trajectory.push_back(energy);
        out.iterations += 1;
        accepted = true;
        last_step = step;
        break;
      }
      step *= cfg.shrink;
    }
    if (!accepted) break;  // line search exhausted near a stationary point
  }

  out.params.layers = layers;
  out.params.beta = theta.head(layers);
  out.params.gamma = theta.tail(layers);
  out.energy = energy;
  return out;
}

EsdEnergyReport energy_with_esd(const DensityMatrix& rho,
                                const ObservableSum& h,
                                const EsdEnergyOptions& opt) {
  require(opt.n >= 1, "energy_with_esd: need at least one copy");
  require(opt.method == 'A' || opt.method == 'B',
          "energy_with_esd: method must be 'A' or 'B'");
  require(h.qubits() == rho.qubits,
          "energy_with_esd: observable size does not match the state");

  EsdEnergyReport rep;
  rep.raw = expectation(rho, h);

  SpectralData sd = spectral_data(rho);
  rep.lambda = sd.lambda;
  rep.dominant = state_energy(sd.dominant, h);

  // rho^n once; every term then costs O(dim)
  ComplexMatrix rho_n = rho.mat;
  for (int k = 1; k < opt.n; ++k) rho_n = rho_n * rho.mat;
  double tr_n = rho_n.trace().real();
  double spectral = 0.0;
  for (const auto& [coeff, term] : h.terms)
    spectral += coeff * pauli_trace(rho_n, term).real();
  rep.spectral = spectral / tr_n;

  const bool noisy_engine = opt.derangement_noise != nullptr;
  std::vector<DensityMatrix> copies(opt.n, rho);

  // Measured ancilla probability for sigma (or the purity proxy when
  // include_observable is false), optionally noise-scaled/extrapolated.
  // Roundoff and extrapolation can overshoot the boundary by a hair, so
  // clamp back into the valid probability range.
  auto engine_prob0 = [&](const PauliString& sigma, bool include) {
    double p0;
    if (!noisy_engine) {
      p0 = prob0_fast(rho, opt.n, sigma, include);
    } else {
      EsdCircuitSpec spec;
      spec.n = opt.n;
      spec.sites = rho.qubits;
      spec.observable = sigma;
      spec.variant = opt.variant;
      spec.include_observable = include;
      if (!opt.zne) {
        p0 = prob0_circuit(copies, spec, opt.derangement_noise, 1.0,
                           opt.qubit_cap);
      } else {
        auto eval = [&](double scale) {
          return prob0_circuit(copies, spec, opt.derangement_noise, scale,
                               opt.qubit_cap);
        };
        std::vector<double> grid = default_eps_grid(1.0, opt.zne_points);
        FitResult fit = zne_pipeline(eval, grid, opt.zne_fit, opt.zne_degree);
        p0 = fit.zero_noise_value;
      }
    }
    return std::clamp(p0, 0.0, 1.0);
  };

  double prob0_prime = 0.0;
  if (opt.method == 'A')
    prob0_prime = engine_prob0(PauliString::identity(rho.qubits), false);

  double energy = 0.0;
  for (const auto& [coeff, term] : h.terms) {
    if (term.is_identity()) {
      energy += coeff;
      continue;
    }
    double p0 = engine_prob0(term, true);
    double est = opt.method == 'A' ? method_a(p0, prob0_prime)
                                   : method_b(p0, sd.lambda, opt.n);
    energy += coeff * est;
    rep.terms += 1;
  }
  rep.energy = energy;
  return rep;
}

}  // namespace esdlab
