#include "esdlab/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <random>
#include <sstream>
#include <tuple>

#include "esdlab/linalg.hpp"

namespace esdlab {

namespace {

ComplexMatrix pauli2(char letter) { return PauliString({letter}).matrix(); }

// exp(-i theta/2 G) for an involutory generator G.
ComplexMatrix involutory_rotation(double theta, const ComplexMatrix& g) {
  long d = g.rows();
  return std::cos(theta / 2) * ComplexMatrix::Identity(d, d) -
         Complex(0, std::sin(theta / 2)) * g;
}

ComplexMatrix block_controlled(const ComplexMatrix& zero_block,
                               const ComplexMatrix& one_block) {
  long d = zero_block.rows();
  ComplexMatrix m = ComplexMatrix::Zero(2 * d, 2 * d);
  m.topLeftCorner(d, d) = zero_block;
  m.bottomRightCorner(d, d) = one_block;
  return m;
}

struct KindInfo {
  const char* name;
  int arity;
  int params;
};

const KindInfo& kind_info(GateKind kind) {
  static const std::map<GateKind, KindInfo> table = {
      {GateKind::rx, {"Rx", 1, 1}},        {GateKind::ry, {"Ry", 1, 1}},
      {GateKind::rz, {"Rz", 1, 1}},        {GateKind::h, {"H", 1, 0}},
      {GateKind::x, {"X", 1, 0}},          {GateKind::y, {"Y", 1, 0}},
      {GateKind::z, {"Z", 1, 0}},          {GateKind::xx, {"XX", 2, 1}},
      {GateKind::yy, {"YY", 2, 1}},        {GateKind::zz, {"ZZ", 2, 1}},
      {GateKind::pswap, {"pSWAP", 2, 2}},  {GateKind::swap_gate, {"SWAP", 2, 0}},
      {GateKind::crx, {"CRx", 2, 1}},      {GateKind::crz, {"CRz", 2, 1}},
      {GateKind::cswap, {"CSWAP", 3, 0}},  {GateKind::ccp, {"CCP", 3, 0}},
      {GateKind::xxx, {"XXX", 3, 1}},      {GateKind::cpauli, {"CPauli", -1, 0}},
      {GateKind::acpauli, {"aCPauli", -1, 0}},
      {GateKind::unitary, {"unitary", -1, 0}},
  };
  return table.at(kind);
}

void check_distinct(const std::vector<int>& qubits) {
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    require(qubits[i] >= 0, "gate: qubit indices must be non-negative");
    for (std::size_t j = i + 1; j < qubits.size(); ++j)
      require(qubits[i] != qubits[j], "gate: qubit indices must be distinct");
  }
}

}  // namespace

ComplexMatrix Gate::matrix() const {
  switch (kind) {
    case GateKind::rx:
      return involutory_rotation(params[0], pauli2('X'));
    case GateKind::ry:
      return involutory_rotation(params[0], pauli2('Y'));
    case GateKind::rz:
      return involutory_rotation(params[0], pauli2('Z'));
    case GateKind::h: {
      ComplexMatrix m(2, 2);
      m << 1, 1, 1, -1;
      return m / std::sqrt(2.0);
    }
    case GateKind::x:
      return pauli2('X');
    case GateKind::y:
      return pauli2('Y');
    case GateKind::z:
      return pauli2('Z');
    case GateKind::xx:
      return involutory_rotation(params[0], PauliString("XX").matrix());
    case GateKind::yy:
      return involutory_rotation(params[0], PauliString("YY").matrix());
    case GateKind::zz:
      return involutory_rotation(params[0], PauliString("ZZ").matrix());
    case GateKind::pswap: {
      // exp(-i t1/2 (XX+YY) - i t2/2 ZZ): the two terms commute.  ZZ is
      // diagonal; XX+YY only mixes |01> and |10>.
      double t1 = params[0], t2 = params[1];
      ComplexMatrix m = ComplexMatrix::Zero(4, 4);
      Complex outer = std::exp(Complex(0, -t2 / 2));
      Complex inner = std::exp(Complex(0, t2 / 2));
      m(0, 0) = m(3, 3) = outer;
      m(1, 1) = m(2, 2) = inner * std::cos(t1);
      m(1, 2) = m(2, 1) = inner * Complex(0, -std::sin(t1));
      return m;
    }
    case GateKind::swap_gate: {
      ComplexMatrix m = ComplexMatrix::Zero(4, 4);
      m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1;
      return m;
    }
    case GateKind::crx:
      return block_controlled(ComplexMatrix::Identity(2, 2),
                              involutory_rotation(params[0], pauli2('X')));
    case GateKind::crz:
      return block_controlled(ComplexMatrix::Identity(2, 2),
                              involutory_rotation(params[0], pauli2('Z')));
    case GateKind::cswap: {
      ComplexMatrix m = ComplexMatrix::Identity(8, 8);
      m(5, 5) = m(6, 6) = 0;
      m(5, 6) = m(6, 5) = 1;
      return m;
    }
    case GateKind::ccp: {
      ComplexMatrix m = ComplexMatrix::Identity(8, 8);
      m(7, 7) = -1;
      return m;
    }
    case GateKind::xxx:
      return involutory_rotation(params[0], PauliString("XXX").matrix());
    case GateKind::cpauli:
      return block_controlled(
          ComplexMatrix::Identity(1L << pauli.size(), 1L << pauli.size()),
          PauliString(pauli).matrix());
    case GateKind::acpauli:
      return block_controlled(
          PauliString(pauli).matrix(),
          ComplexMatrix::Identity(1L << pauli.size(), 1L << pauli.size()));
    case GateKind::unitary:
      return custom;
  }
  throw std::logic_error("Gate::matrix: unreachable");
}

Gate make_gate(GateKind kind, std::vector<int> qubits,
               std::vector<double> params) {
  const KindInfo& info = kind_info(kind);
  require(info.arity > 0,
          std::string("make_gate: use the dedicated maker for ") + info.name);
  require(static_cast<int>(qubits.size()) == info.arity,
          std::string(info.name) + ": wrong qubit count");
  require(static_cast<int>(params.size()) == info.params,
          std::string(info.name) + ": wrong parameter count");
  check_distinct(qubits);
  Gate g;
  g.kind = kind;
  g.qubits = std::move(qubits);
  g.params = std::move(params);
  return g;
}

Gate make_cpauli(bool anti, int control, std::vector<int> targets,
                 std::string letters) {
  require(!targets.empty(), "make_cpauli: need at least one target");
  require(letters.size() == targets.size(),
          "make_cpauli: one letter per target qubit");
  (void)PauliString(letters);  // validates the alphabet
  Gate g;
  g.kind = anti ? GateKind::acpauli : GateKind::cpauli;
  g.qubits.push_back(control);
  g.qubits.insert(g.qubits.end(), targets.begin(), targets.end());
  check_distinct(g.qubits);
  g.pauli = std::move(letters);
  return g;
}

Gate make_unitary(std::vector<int> qubits, ComplexMatrix u, double tol) {
  require(!qubits.empty(), "make_unitary: need at least one qubit");
  check_distinct(qubits);
  const long dim = 1L << qubits.size();
  require(u.rows() == dim && u.cols() == dim,
          "make_unitary: matrix shape does not match the qubit count");
  ComplexMatrix gram = u.adjoint() * u;
  require((gram - ComplexMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff() <=
              tol,
          "make_unitary: matrix is not unitary");
  Gate g;
  g.kind = GateKind::unitary;
  g.qubits = std::move(qubits);
  g.custom = std::move(u);
  return g;
}

const char* gate_kind_name(GateKind kind) { return kind_info(kind).name; }
int gate_kind_arity(GateKind kind) { return kind_info(kind).arity; }
int gate_kind_params(GateKind kind) { return kind_info(kind).params; }

void Circuit::push(Gate g) {
  for (int q : g.qubits)
    require(q >= 0 && q < qubits, "Circuit::push: qubit index out of range");
  if (g.kind == GateKind::cpauli || g.kind == GateKind::acpauli)
    require(g.pauli.size() + 1 == g.qubits.size(),
            "Circuit::push: malformed controlled-Pauli gate");
  gates.push_back(std::move(g));
}

int Circuit::entangling_count() const {
  int n = 0;
  for (const Gate& g : gates) n += g.entangling() ? 1 : 0;
  return n;
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

int parse_qubit(const std::string& token) {
  char* end = nullptr;
  long v = std::strtol(token.c_str(), &end, 10);
  require(end != token.c_str() && *end == '\0' && v >= 0 && v < 64,
          "circuit: bad qubit index '" + token + "'");
  return static_cast<int>(v);
}

double parse_angle(const std::string& token) {
  char* end = nullptr;
  double v = std::strtod(token.c_str(), &end);
  require(end != token.c_str() && *end == '\0',
          "circuit: bad angle '" + token + "'");
  return v;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Circuit Circuit::parse(std::string_view text) {
  std::vector<Gate> gates;
  int max_qubit = -1;
  std::istringstream lines{std::string(text)};
  std::string line;
  while (std::getline(lines, line)) {
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::vector<std::string> tokens;
    std::string w;
    while (words >> w) tokens.push_back(w);
    if (tokens.empty()) continue;
    require(tokens.size() <= 3, "circuit: too many fields on line '" + line +
                                    "'");
    const std::string& name = tokens[0];
    require(name != "unitary",
            "circuit: explicit-matrix gates have no text form");
    GateKind kind = GateKind::h;
    bool found = false;
    for (GateKind k :
         {GateKind::rx, GateKind::ry, GateKind::rz, GateKind::h, GateKind::x,
          GateKind::y, GateKind::z, GateKind::xx, GateKind::yy, GateKind::zz,
          GateKind::pswap, GateKind::swap_gate, GateKind::crx, GateKind::crz,
          GateKind::cswap, GateKind::ccp, GateKind::xxx, GateKind::cpauli,
          GateKind::acpauli}) {
      if (name == kind_info(k).name) {
        kind = k;
        found = true;
        break;
      }
    }
    require(found, "circuit: unknown gate kind '" + name + "'");
    require(tokens.size() >= 2, "circuit: missing qubit list for " + name);
    std::vector<int> qubits;
    for (const std::string& t : split(tokens[1], ','))
      qubits.push_back(parse_qubit(t));

    Gate g;
    if (kind == GateKind::cpauli || kind == GateKind::acpauli) {
      require(tokens.size() == 3,
              "circuit: controlled-Pauli line needs its letters");
      require(qubits.size() >= 2,
              "circuit: controlled-Pauli needs a control and targets");
      std::vector<int> targets(qubits.begin() + 1, qubits.end());
      g = make_cpauli(kind == GateKind::acpauli, qubits[0],
                      std::move(targets), tokens[2]);
    } else {
      std::vector<double> params;
      if (tokens.size() == 3)
        for (const std::string& t : split(tokens[2], ','))
          params.push_back(parse_angle(t));
      g = make_gate(kind, std::move(qubits), std::move(params));
    }
    for (int q : g.qubits) max_qubit = std::max(max_qubit, q);
    gates.push_back(std::move(g));
  }
  require(!gates.empty(), "circuit: no gates in text");
  Circuit c(max_qubit + 1);
  for (Gate& g : gates) c.push(std::move(g));
  return c;
}

std::string Circuit::format() const {
  std::string out;
  for (const Gate& g : gates) {
    require(g.kind != GateKind::unitary,
            "circuit: explicit-matrix gates have no text form");
    out += kind_info(g.kind).name;
    out += ' ';
    for (std::size_t i = 0; i < g.qubits.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(g.qubits[i]);
    }
    if (g.kind == GateKind::cpauli || g.kind == GateKind::acpauli) {
      out += ' ';
      out += g.pauli;
    } else if (!g.params.empty()) {
      out += ' ';
      for (std::size_t i = 0; i < g.params.size(); ++i) {
        if (i) out += ',';
        out += format_double(g.params[i]);
      }
    }
    out += '\n';
  }
  return out;
}

namespace {

// Index bookkeeping for a k-qubit operator embedded in an nq-qubit
// register.  Qubit 0 is the most significant bit of the global index and
// the first listed qubit the most significant bit of the local one.
struct Placement {
  int k = 0;
  std::vector<long> rest;   // global bases with all target bits clear
  std::vector<long> local;  // local index -> global offset

  Placement(std::span<const int> qubits, int nq) {
    k = static_cast<int>(qubits.size());
    long mask = 0;
    for (int q : qubits) {
      require(q >= 0 && q < nq, "placement: qubit index out of range");
      long bit = 1L << (nq - 1 - q);
      require((mask & bit) == 0, "placement: qubit indices must be distinct");
      mask |= bit;
    }
    const long dim = 1L << nq;
    rest.reserve(dim >> k);
    for (long g = 0; g < dim; ++g)
      if ((g & mask) == 0) rest.push_back(g);
    local.resize(1L << k);
    for (long t = 0; t < (1L << k); ++t) {
      long off = 0;
      for (int i = 0; i < k; ++i)
        if ((t >> (k - 1 - i)) & 1) off += 1L << (nq - 1 - qubits[i]);
      local[t] = off;
    }
  }
};

// Monomial unitaries (one nonzero per row and column) act as signed
// permutations; detect them so gate application stays quadratic.
bool monomial_decompose(const ComplexMatrix& u, std::vector<long>& row,
                        std::vector<Complex>& phase) {
  const long d = u.rows();
  row.assign(d, -1);
  phase.assign(d, Complex(0));
  std::vector<char> used(d, 0);
  for (long j = 0; j < d; ++j) {
    long hit = -1;
    for (long i = 0; i < d; ++i) {
      double a = std::abs(u(i, j));
      if (a <= 1e-14) continue;
      if (std::abs(a - 1.0) > 1e-12 || hit != -1) return false;
      hit = i;
    }
    if (hit < 0 || used[hit]) return false;
    used[hit] = 1;
    row[j] = hit;
    phase[j] = u(hit, j);
  }
  return true;
}

// m <- m U†_embedded: within each column group, new_col(t) is a
// conj(u)-combination of the old columns.  Column operations keep the
// work vectorized for column-major storage.
void right_mul_udag(ComplexMatrix& m, const ComplexMatrix& u,
                    const Placement& pl) {
  const int dl = static_cast<int>(u.rows());
  ComplexMatrix group(m.rows(), dl);
  for (long rc : pl.rest) {
    for (int s = 0; s < dl; ++s) group.col(s) = m.col(rc + pl.local[s]);
    for (int t = 0; t < dl; ++t) {
      auto dest = m.col(rc + pl.local[t]);
      dest = std::conj(u(t, 0)) * group.col(0);
      for (int s = 1; s < dl; ++s) dest += std::conj(u(t, s)) * group.col(s);
    }
  }
}

void conjugate_monomial(ComplexMatrix& m, const Placement& pl,
                        const std::vector<long>& lrow,
                        const std::vector<Complex>& lphase) {
  const long dim = m.rows();
  const int dl = static_cast<int>(lrow.size());
  std::vector<long> gmap(dim);
  std::vector<Complex> gphase(dim);
  for (long base : pl.rest)
    for (int t = 0; t < dl; ++t) {
      gmap[base + pl.local[t]] = base + pl.local[lrow[t]];
      gphase[base + pl.local[t]] = lphase[t];
    }
  ComplexMatrix out(dim, dim);
  for (long j = 0; j < dim; ++j) {
    const Complex pj = std::conj(gphase[j]);
    const long cj = gmap[j];
    for (long i = 0; i < dim; ++i)
      out(gmap[i], cj) = gphase[i] * pj * m(i, j);
  }
  m.swap(out);
}

void conjugate_unitary(ComplexMatrix& m, const ComplexMatrix& u,
                       const Placement& pl) {
  std::vector<long> lrow;
  std::vector<Complex> lphase;
  if (monomial_decompose(u, lrow, lphase)) {
    conjugate_monomial(m, pl, lrow, lphase);
    return;
  }
  // U m U† = ((m U†)† U†)†, so two column-space passes suffice.
  right_mul_udag(m, u, pl);
  m.adjointInPlace();
  right_mul_udag(m, u, pl);
  m.adjointInPlace();
}

}  // namespace

void apply_gate(DensityMatrix& rho, const Gate& g) {
  Placement pl(g.qubits, rho.qubits);
  conjugate_unitary(rho.mat, g.matrix(), pl);
}

void apply_gate_state(ComplexVector& psi, const Gate& g, int qubits) {
  require(psi.size() == (1L << qubits),
          "apply_gate_state: state size does not match the qubit count");
  Placement pl(g.qubits, qubits);
  ComplexMatrix u = g.matrix();
  const int dl = static_cast<int>(u.rows());
  std::vector<long> lrow;
  std::vector<Complex> lphase;
  if (monomial_decompose(u, lrow, lphase)) {
    ComplexVector out(psi.size());
    for (long base : pl.rest)
      for (int t = 0; t < dl; ++t)
        out(base + pl.local[lrow[t]]) = lphase[t] * psi(base + pl.local[t]);
    psi.swap(out);
    return;
  }
  std::vector<Complex> buf(dl);
  for (long base : pl.rest) {
    for (int t = 0; t < dl; ++t) buf[t] = psi(base + pl.local[t]);
    for (int t = 0; t < dl; ++t) {
      Complex s = 0;
      for (int m = 0; m < dl; ++m) s += u(t, m) * buf[m];
      psi(base + pl.local[t]) = s;
    }
  }
}

void apply_channel(DensityMatrix& rho, const KrausChannel& ch,
                   std::span<const int> qubits) {
  require(static_cast<int>(qubits.size()) == ch.arity,
          "apply_channel: qubit list does not match the channel arity");
  Placement pl(qubits, rho.qubits);
  const int dl = 1 << ch.arity;
  const long nrest = static_cast<long>(pl.rest.size());

  if (ch.family == ChannelFamily::depolarizing) {
    // (1-p) rho + p Id/2^k ⊗ tr_k[rho]: one partial trace, one scatter.
    ComplexMatrix traced(nrest, nrest);
    for (long b = 0; b < nrest; ++b)
      for (long a = 0; a < nrest; ++a) {
        Complex s = 0;
        for (int t = 0; t < dl; ++t)
          s += rho.mat(pl.rest[a] + pl.local[t], pl.rest[b] + pl.local[t]);
        traced(a, b) = s;
      }
    rho.mat *= (1.0 - ch.prob);
    const double w = ch.prob / dl;
    for (long b = 0; b < nrest; ++b)
      for (long a = 0; a < nrest; ++a)
        for (int t = 0; t < dl; ++t)
          rho.mat(pl.rest[a] + pl.local[t], pl.rest[b] + pl.local[t]) +=
              w * traced(a, b);
    return;
  }

  const ComplexMatrix& sop = ch.superoperator();
  const int d2 = dl * dl;
  ComplexVector v(d2), w(d2);
  for (long b = 0; b < nrest; ++b)
    for (long a = 0; a < nrest; ++a) {
      for (int t = 0; t < dl; ++t)
        for (int s = 0; s < dl; ++s)
          v(t * dl + s) =
              rho.mat(pl.rest[a] + pl.local[t], pl.rest[b] + pl.local[s]);
      w.noalias() = sop * v;
      for (int t = 0; t < dl; ++t)
        for (int s = 0; s < dl; ++s)
          rho.mat(pl.rest[a] + pl.local[t], pl.rest[b] + pl.local[s]) =
              w(t * dl + s);
    }
}

namespace {

using ChannelKey = std::tuple<int, int, double>;  // family, arity, prob

const KrausChannel& cached_channel(std::map<ChannelKey, KrausChannel>& cache,
                                   ChannelFamily family, int arity,
                                   double p) {
  ChannelKey key{static_cast<int>(family), arity, p};
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  KrausChannel ch = [&] {
    switch (family) {
      case ChannelFamily::depolarizing: return depolarizing_channel(arity, p);
      case ChannelFamily::dephasing: return dephasing_channel(p);
      case ChannelFamily::damping: return damping_channel(p);
      default:
        throw std::invalid_argument(
            "run_circuit: generic noise entries are not supported");
    }
  }();
  return cache.emplace(key, std::move(ch)).first->second;
}

}  // namespace

DensityMatrix run_circuit(const DensityMatrix& rho0, const Circuit& c,
                          const NoiseModel* nm, double eps_scale) {
  require(rho0.qubits == c.qubits,
          "run_circuit: state and circuit qubit counts differ");
  DensityMatrix rho = rho0;
  std::map<ChannelKey, KrausChannel> cache;
  for (const Gate& g : c.gates) {
    apply_gate(rho, g);
    if (nm == nullptr) continue;
    for (const NoiseEntry& entry : nm->entries(g.gate_class())) {
      double p = effective_prob(entry, eps_scale);
      if (p == 0.0) continue;
      if (entry.family == ChannelFamily::depolarizing) {
        apply_channel(rho, cached_channel(cache, entry.family, g.arity(), p),
                      g.qubits);
      } else {
        for (int q : g.qubits) {
          int single[] = {q};
          apply_channel(rho, cached_channel(cache, entry.family, 1, p),
                        single);
        }
      }
    }
  }
  return rho;
}

ComplexVector run_circuit_state(const ComplexVector& psi0, const Circuit& c) {
  require(psi0.size() == (1L << c.qubits),
          "run_circuit_state: state size does not match the circuit");
  ComplexVector psi = psi0;
  for (const Gate& g : c.gates) apply_gate_state(psi, g, c.qubits);
  return psi;
}

double circuit_xi(const Circuit& c, const NoiseModel& nm, double eps_scale) {
  double xi = 0;
  for (const Gate& g : c.gates)
    for (const NoiseEntry& entry : nm.entries(g.gate_class())) {
      double p = effective_prob(entry, eps_scale);
      xi += entry.family == ChannelFamily::depolarizing ? p : p * g.arity();
    }
  return xi;
}

int ansatz_param_count(int qubits, int blocks) {
  require(qubits >= 2, "ansatz: need at least two qubits");
  require(blocks >= 1, "ansatz: need at least one block");
  return qubits + 3 * qubits * blocks;
}

Circuit build_alternating_ansatz(int qubits, int blocks,
                                 std::span<const double> params) {
  const int want = ansatz_param_count(qubits, blocks);
  require(static_cast<int>(params.size()) == want,
          "ansatz: wrong parameter count");
  Circuit c(qubits);
  std::size_t next = 0;
  auto take = [&] { return params[next++]; };
  for (int q = 0; q < qubits; ++q)
    c.push(make_gate(GateKind::ry, {q}, {take()}));
  for (int b = 0; b < blocks; ++b) {
    for (int q = 0; q < qubits; ++q)
      c.push(make_gate(GateKind::ry, {q}, {take()}));
    for (int q = 0; q < qubits; ++q)
      c.push(make_gate(GateKind::rz, {q}, {take()}));
    for (int q = 0; q < qubits; ++q)
      c.push(make_gate(GateKind::xx, {q, (q + 1) % qubits}, {take()}));
  }
  return c;
}

Circuit build_alternating_ansatz(int qubits, int blocks, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> params(ansatz_param_count(qubits, blocks));
  for (double& p : params)
    p = 2 * M_PI * ((rng() >> 11) * 0x1.0p-53);
  return build_alternating_ansatz(qubits, blocks, params);
}

}  // namespace esdlab
