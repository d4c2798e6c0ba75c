#include "esdlab/channels.hpp"

#include <json.hpp>

#include <cmath>
#include <string>

#include "esdlab/linalg.hpp"

namespace esdlab {

KrausChannel KrausChannel::make(int arity, std::vector<ComplexMatrix> ops,
                                ChannelFamily family, double prob) {
  require(arity >= 1, "KrausChannel: arity must be positive");
  require(!ops.empty(), "KrausChannel: need at least one operator");
  const long dim = 1L << arity;
  ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
  for (const ComplexMatrix& k : ops) {
    require(k.rows() == dim && k.cols() == dim,
            "KrausChannel: operator shape does not match arity");
    sum += k.adjoint() * k;
  }
  ComplexMatrix id = ComplexMatrix::Identity(dim, dim);
  require((sum - id).cwiseAbs().maxCoeff() <= 1e-10,
          "KrausChannel: operators do not satisfy completeness");
  KrausChannel ch;
  ch.arity = arity;
  ch.ops = std::move(ops);
  ch.family = family;
  ch.prob = prob;
  return ch;
}

const ComplexMatrix& KrausChannel::superoperator() const {
  if (superop_.size() == 0) {
    const long d2 = (1L << arity) * (1L << arity);
    superop_ = ComplexMatrix::Zero(d2, d2);
    for (const ComplexMatrix& k : ops)
      superop_ += kron(k, k.conjugate());
  }
  return superop_;
}

KrausChannel depolarizing_channel(int qubits, double p) {
  require(qubits >= 1 && qubits <= 3,
          "depolarizing_channel: supports one to three qubits");
  require(p >= 0.0 && p <= 1.0,
          "depolarizing_channel: probability must be in [0, 1]");
  const int count = 1 << (2 * qubits);  // 4^k Pauli strings
  const double w_id = std::sqrt(1.0 - p * (count - 1) / count);
  const double w_err = std::sqrt(p / count);
  static const char letters[] = {'I', 'X', 'Y', 'Z'};
  std::vector<ComplexMatrix> ops;
  ops.reserve(count);
  for (int idx = 0; idx < count; ++idx) {
    std::string s(qubits, 'I');
    for (int q = 0; q < qubits; ++q)
      s[q] = letters[(idx >> (2 * (qubits - 1 - q))) & 3];
    ops.push_back((idx == 0 ? w_id : w_err) * PauliString(s).matrix());
  }
  return KrausChannel::make(qubits, std::move(ops),
                            ChannelFamily::depolarizing, p);
}

KrausChannel dephasing_channel(double p) {
  require(p >= 0.0 && p <= 1.0,
          "dephasing_channel: probability must be in [0, 1]");
  std::vector<ComplexMatrix> ops = {
      std::sqrt(1.0 - p) * PauliString("I").matrix(),
      std::sqrt(p) * PauliString("Z").matrix()};
  return KrausChannel::make(1, std::move(ops), ChannelFamily::dephasing, p);
}

KrausChannel damping_channel(double p) {
  require(p >= 0.0 && p <= 1.0,
          "damping_channel: probability must be in [0, 1]");
  ComplexMatrix k0 = ComplexMatrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - p);
  ComplexMatrix k1 = ComplexMatrix::Zero(2, 2);
  k1(0, 1) = std::sqrt(p);
  return KrausChannel::make(1, {k0, k1}, ChannelFamily::damping, p);
}

GateClass gate_class_for_arity(int arity) {
  require(arity >= 1, "gate_class_for_arity: arity must be positive");
  if (arity == 1) return GateClass::one_qubit;
  if (arity == 2) return GateClass::two_qubit;
  return GateClass::three_qubit;
}

const std::vector<NoiseEntry>& NoiseModel::entries(GateClass c) const {
  switch (c) {
    case GateClass::one_qubit: return one_qubit;
    case GateClass::two_qubit: return two_qubit;
    default: return three_qubit;
  }
}

std::vector<NoiseEntry>& NoiseModel::entries(GateClass c) {
  switch (c) {
    case GateClass::one_qubit: return one_qubit;
    case GateClass::two_qubit: return two_qubit;
    default: return three_qubit;
  }
}

double effective_prob(const NoiseEntry& entry, double eps_scale) {
  return entry.amplifiable ? entry.prob * eps_scale : entry.prob;
}

namespace {

const char* family_name(ChannelFamily f) {
  switch (f) {
    case ChannelFamily::depolarizing: return "depolarizing";
    case ChannelFamily::dephasing: return "dephasing";
    case ChannelFamily::damping: return "damping";
    default: return "generic";
  }
}

ChannelFamily family_from_name(const std::string& name) {
  if (name == "depolarizing") return ChannelFamily::depolarizing;
  if (name == "dephasing") return ChannelFamily::dephasing;
  if (name == "damping") return ChannelFamily::damping;
  throw std::invalid_argument("noise model: unknown channel family '" + name +
                              "'");
}

const char* const kClassKeys[] = {"one_qubit", "two_qubit", "three_qubit"};

}  // namespace

NoiseModel noise_model_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("noise model: bad json: ") +
                                e.what());
  }
  require(j.is_object(), "noise model: top level must be an object");
  NoiseModel nm;
  for (int c = 0; c < 3; ++c) {
    if (!j.contains(kClassKeys[c])) continue;
    const nlohmann::json& arr = j.at(kClassKeys[c]);
    require(arr.is_array(), "noise model: class entries must be an array");
    for (const nlohmann::json& e : arr) {
      require(e.is_object() && e.contains("family") && e.contains("prob"),
              "noise model: entry needs 'family' and 'prob'");
      NoiseEntry entry;
      entry.family = family_from_name(e.at("family").get<std::string>());
      entry.prob = e.at("prob").get<double>();
      require(entry.prob >= 0.0 && entry.prob <= 1.0,
              "noise model: probability must be in [0, 1]");
      entry.amplifiable = e.value("amplifiable", true);
      nm.entries(static_cast<GateClass>(c)).push_back(entry);
    }
  }
  return nm;
}

std::string noise_model_to_json(const NoiseModel& nm) {
  nlohmann::json j = nlohmann::json::object();
  for (int c = 0; c < 3; ++c) {
    nlohmann::json arr = nlohmann::json::array();
    for (const NoiseEntry& e : nm.entries(static_cast<GateClass>(c)))
      arr.push_back({{"family", family_name(e.family)},
                     {"prob", e.prob},
                     {"amplifiable", e.amplifiable}});
    j[kClassKeys[c]] = arr;
  }
  return j.dump(2);
}

}  // namespace esdlab
