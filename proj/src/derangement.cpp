#include "esdlab/derangement.hpp"

#include <cmath>
#include <cstdio>

#include "esdlab/linalg.hpp"

namespace esdlab {

long cyclic_derangement_count(int n) {
  require(n >= 2 && n <= 20, "cyclic_derangement_count: n must be in 2..20");
  long f = 1;
  for (int i = 2; i < n; ++i) f *= i;
  return f;
}

DerangementSpec cyclic_derangement(int n, long variant_index) {
  long count = cyclic_derangement_count(n);
  require(variant_index >= 0 && variant_index < count,
          "cyclic_derangement: variant index out of range");
  // Factorial-base digits of the index select from the descending
  // candidate pool, so index 0 walks n-1, n-2, ..., 1: the cyclic shift.
  std::vector<int> pool;
  for (int v = n - 1; v >= 1; --v) pool.push_back(v);
  std::vector<int> chain;
  long rem = variant_index;
  for (int pos = n - 2; pos >= 0; --pos) {
    long f = 1;
    for (int i = 2; i <= pos; ++i) f *= i;
    long digit = rem / f;
    rem %= f;
    chain.push_back(pool[digit]);
    pool.erase(pool.begin() + digit);
  }
  DerangementSpec spec;
  spec.n = n;
  spec.perm.assign(n, 0);
  int prev = 0;
  for (int d : chain) {
    spec.perm[prev] = d;
    prev = d;
  }
  spec.perm[prev] = 0;
  spec.transpositions = transposition_decomposition(spec.perm);
  return spec;
}

std::vector<std::pair<int, int>> transposition_decomposition(
    std::span<const int> perm) {
  const int n = static_cast<int>(perm.size());
  require(n >= 2, "transposition_decomposition: need at least two registers");
  std::vector<char> seen(n, 0);
  for (int v : perm) {
    require(v >= 0 && v < n && !seen[v],
            "transposition_decomposition: not a permutation");
    seen[v] = 1;
  }
  // Walk the cycle through register 0; a fixed-point-free single n-cycle
  // visits everything exactly once.
  std::vector<int> chain;
  int at = perm[0];
  while (at != 0) {
    chain.push_back(at);
    require(static_cast<int>(chain.size()) < n,
            "transposition_decomposition: permutation is not a single cycle");
    at = perm[at];
  }
  require(static_cast<int>(chain.size()) == n - 1,
          "transposition_decomposition: permutation is not a single n-cycle");
  std::vector<std::pair<int, int>> out;
  out.reserve(n - 1);
  for (int i = n - 2; i >= 0; --i) out.emplace_back(0, chain[i]);
  return out;
}

int esd_register_qubit(int reg, int site, int sites) {
  require(reg >= 0 && sites >= 1 && site >= 0 && site < sites,
          "esd_register_qubit: index out of range");
  return 1 + reg * sites + site;
}

Circuit build_esd_circuit(const EsdCircuitSpec& spec) {
  require(spec.sites >= 1, "build_esd_circuit: registers need qubits");
  require(spec.observable.qubits() == spec.sites,
          "build_esd_circuit: observable length must match the register size");
  require(spec.twirl.empty() ||
              static_cast<int>(spec.twirl.size()) == spec.n,
          "build_esd_circuit: twirl needs one Pauli string per register");
  for (const PauliString& p : spec.twirl)
    require(p.qubits() == spec.sites,
            "build_esd_circuit: twirl string length must match the register");
  DerangementSpec d = cyclic_derangement(spec.n, spec.variant);

  Circuit c(1 + spec.n * spec.sites);
  auto q = [&](int reg, int site) {
    return esd_register_qubit(reg, site, spec.sites);
  };
  c.push(make_gate(GateKind::h, {0}));

  if (!spec.twirl.empty())
    for (int k = 0; k < spec.n; ++k)
      for (int j = 0; j < spec.sites; ++j)
        switch (spec.twirl[k].str()[j]) {
          case 'X': c.push(make_gate(GateKind::x, {q(k, j)})); break;
          case 'Y': c.push(make_gate(GateKind::y, {q(k, j)})); break;
          case 'Z': c.push(make_gate(GateKind::z, {q(k, j)})); break;
          default: break;
        }

  for (auto [a, b] : d.transpositions)
    for (int j = 0; j < spec.sites; ++j)
      c.push(make_gate(GateKind::cswap, {0, q(a, j), q(b, j)}));

  if (!spec.twirl.empty()) {
    // Undo: anti-controlled P_k, then controlled P_{s(k)} (the
    // derangement moved register s(k)'s content to register k).
    for (int k = 0; k < spec.n; ++k)
      for (int j = 0; j < spec.sites; ++j) {
        char letter = spec.twirl[k].str()[j];
        if (letter != 'I')
          c.push(make_cpauli(true, 0, {q(k, j)}, std::string(1, letter)));
      }
    for (int k = 0; k < spec.n; ++k)
      for (int j = 0; j < spec.sites; ++j) {
        char letter = spec.twirl[d.perm[k]].str()[j];
        if (letter != 'I')
          c.push(make_cpauli(false, 0, {q(k, j)}, std::string(1, letter)));
      }
  }

  if (spec.include_observable)
    for (int j = 0; j < spec.sites; ++j) {
      char letter = spec.observable.str()[j];
      if (letter != 'I')
        c.push(make_cpauli(false, 0, {q(0, j)}, std::string(1, letter)));
    }

  c.push(make_gate(GateKind::h, {0}));
  return c;
}

double prob0_circuit(std::span<const DensityMatrix> copies,
                     const EsdCircuitSpec& spec, const NoiseModel* nm,
                     double eps_scale, int cap) {
  require(static_cast<int>(copies.size()) == spec.n,
          "prob0_circuit: need one density matrix per register");
  for (const DensityMatrix& rho : copies)
    require(rho.qubits == spec.sites,
            "prob0_circuit: copy size must match the register size");
  const int total = spec.n * spec.sites + 1;
  if (total > cap) {
    double mib = std::ldexp(16.0, 2 * total) / (1024.0 * 1024.0);
    char msg[160];
    std::snprintf(msg, sizeof(msg),
                  "prob0_circuit: %d qubits exceeds the %d-qubit cap "
                  "(state alone needs %.3g MiB); use prob0_fast",
                  total, cap, mib);
    throw std::invalid_argument(msg);
  }

  std::vector<ComplexMatrix> factors;
  factors.reserve(copies.size() + 1);
  ComplexMatrix anc = ComplexMatrix::Zero(2, 2);
  anc(0, 0) = 1;
  factors.push_back(anc);
  for (const DensityMatrix& rho : copies) factors.push_back(rho.mat);

  DensityMatrix in{total, kron(factors)};
  DensityMatrix out = run_circuit(in, build_esd_circuit(spec), nm, eps_scale);
  double p0 = 0;
  for (long i = 0; i < out.dim() / 2; ++i) p0 += out.mat(i, i).real();
  return p0;
}

double prob0_fast(std::span<const DensityMatrix> copies,
                  const PauliString& sigma, bool include_observable) {
  require(!copies.empty(), "prob0_fast: need at least one copy");
  const int sites = copies[0].qubits;
  for (const DensityMatrix& rho : copies)
    require(rho.qubits == sites, "prob0_fast: copies must be the same size");
  std::vector<ComplexMatrix> mats;
  mats.reserve(copies.size() + 1);
  if (include_observable) {
    require(sigma.qubits() == sites,
            "prob0_fast: observable length must match the copies");
    mats.push_back(sigma.matrix());
  }
  for (const DensityMatrix& rho : copies) mats.push_back(rho.mat);
  return 0.5 + 0.5 * product_trace(mats).real();
}

double prob0_fast(const DensityMatrix& rho, int n, const PauliString& sigma,
                  bool include_observable) {
  require(n >= 1, "prob0_fast: need at least one copy");
  std::vector<ComplexMatrix> mats;
  mats.reserve(n + 1);
  if (include_observable) {
    require(sigma.qubits() == rho.qubits,
            "prob0_fast: observable length must match the state");
    mats.push_back(sigma.matrix());
  }
  for (int k = 0; k < n; ++k) mats.push_back(rho.mat);
  return 0.5 + 0.5 * product_trace(mats).real();
}

}  // namespace esdlab
