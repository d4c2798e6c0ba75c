#include "esdlab/estimator.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace esdlab {

namespace {

void check_prob(const char* name, double v) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
  }
}

void check_lambda(const char* name, double lambda) {
  if (!(lambda > 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in (0, 1]");
  }
}

void check_order(int n) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
}

double lambda_power(double lambda, double exponent) {
  double value = std::pow(lambda, exponent);
  if (value < 1e-300) {
    throw std::invalid_argument("lambda power underflows below 1e-300");
  }
  return value;
}

long long ceil_shots(double raw) {
  if (!(raw >= 0.0) || raw > 9e18) {
    throw std::invalid_argument("shot count overflows the budget range");
  }
  return std::max(1LL, static_cast<long long>(std::ceil(raw)));
}

}  // namespace

double method_a(double prob0, double prob0_prime) {
  check_prob("prob0", prob0);
  check_prob("prob0_prime", prob0_prime);
  double denom = 2.0 * prob0_prime - 1.0;
  if (!(denom > 0.0)) {
    throw std::invalid_argument(
        "method_a: denominator 2*prob0_prime - 1 is not positive, estimate "
        "undefined");
  }
  return (2.0 * prob0 - 1.0) / denom;
}

double method_b(double prob0, double lambda, int n) {
  check_prob("prob0", prob0);
  check_lambda("lambda", lambda);
  check_order(n);
  return (2.0 * prob0 - 1.0) / lambda_power(lambda, n);
}

double suppression_factor(double lambda, double p_max) {
  check_lambda("lambda", lambda);
  check_prob("p_max", p_max);
  return (1.0 / lambda - 1.0) * p_max;
}

QnBounds bound_qn(double lambda, std::span<const double> p, int n) {
  check_lambda("lambda", lambda);
  check_order(n);
  double sum = 0.0;
  double power_sum = 0.0;
  for (double pk : p) {
    if (!(pk >= 0.0)) {
      throw std::invalid_argument("error probabilities must be non-negative");
    }
    sum += pk;
    power_sum += std::pow(pk, n);
  }
  if (sum > 1.0 + 1e-9) {
    throw std::invalid_argument("error probabilities must sum to at most 1");
  }
  QnBounds out;
  out.q_n = std::pow(1.0 / lambda - 1.0, n) * power_sum;
  out.bound_b = out.q_n;
  out.bound_a = 2.0 * out.q_n / (1.0 + out.q_n);
  return out;
}

double bound_qn_general(double lambda, double p_max, int n) {
  check_lambda("lambda", lambda);
  check_order(n);
  if (!(p_max > 0.0 && p_max <= 1.0)) {
    throw std::invalid_argument("p_max must lie in (0, 1]");
  }
  return std::pow(1.0 / lambda - 1.0, n) * std::pow(p_max, n - 1);
}

double bound_qn_effective(double lambda_min,
                          std::span<const double> p_max_elementwise, int n) {
  check_lambda("lambda_min", lambda_min);
  check_order(n);
  double power_sum = 0.0;
  for (double pk : p_max_elementwise) {
    check_prob("p_max_elementwise entry", pk);
    power_sum += std::pow(pk, n);
  }
  return std::pow(1.0 / lambda_min - 1.0, n) * power_sum;
}

GenericNonIdenticalBound bound_generic_nonidentical(double lambda_min, int n) {
  check_lambda("lambda_min", lambda_min);
  check_order(n);
  GenericNonIdenticalBound out;
  out.scale = std::pow(1.0 / lambda_min - 1.0, n);
  out.exponential_guarantee = lambda_min > 0.5;
  return out;
}

int copies_required(double precision, double lambda, double p_max) {
  if (!(precision > 0.0)) {
    throw std::invalid_argument("precision must be positive");
  }
  check_lambda("lambda", lambda);
  if (!(p_max > 0.0 && p_max <= 1.0)) {
    throw std::invalid_argument("p_max must lie in (0, 1]");
  }
  double q = suppression_factor(lambda, p_max);
  if (q >= 1.0) {
    throw std::invalid_argument(
        "Q >= 1: no finite copy count reaches the requested precision");
  }
  double numerator = std::log(1.0 / precision) + std::log(2.0 / p_max);
  double ratio = numerator / std::log(1.0 / q);
  if (ratio > 2e9) {
    throw std::invalid_argument("copy count exceeds the integer range");
  }
  int n = static_cast<int>(std::ceil(ratio));
  return std::max(2, n);
}

double overhead_exponent(double lambda, double q) {
  check_lambda("lambda", lambda);
  if (!(q > 0.0 && q < 1.0)) {
    throw std::invalid_argument("Q must lie in (0, 1)");
  }
  return std::log(1.0 / lambda) / std::log(1.0 / q);
}

ShotCounts shots_required(char method, double precision, double lambda, int n,
                          double prob0, double prob0_prime) {
  char m = static_cast<char>(std::toupper(static_cast<unsigned char>(method)));
  if (m != 'A' && m != 'B') {
    throw std::invalid_argument("method must be 'A' or 'B'");
  }
  if (!(precision > 0.0)) {
    throw std::invalid_argument("precision must be positive");
  }
  check_lambda("lambda", lambda);
  check_order(n);
  check_prob("prob0", prob0);
  check_prob("prob0_prime", prob0_prime);

  double e2 = precision * precision;
  double l2n = lambda_power(lambda, 2.0 * n);
  ShotCounts out;
  if (m == 'B') {
    out.ns1 = ceil_shots(4.0 * prob0 * (1.0 - prob0) / (e2 * l2n));
    out.total = out.ns1;
    return out;
  }
  double l4n = lambda_power(lambda, 4.0 * n);
  double num2 = 8.0 * prob0_prime * (1.0 - prob0_prime) *
                (2.0 * prob0 - 1.0) * (2.0 * prob0 - 1.0);
  out.ns1 = ceil_shots(8.0 * prob0 * (1.0 - prob0) / (e2 * l2n));
  out.ns2 = ceil_shots(num2 / (e2 * l4n));
  out.total = out.ns1 + out.ns2;
  return out;
}

int attenuation_qubit_limit(double gate_error, double threshold) {
  if (!(gate_error >= 0.0 && gate_error < 1.0)) {
    throw std::invalid_argument("gate_error must lie in [0, 1)");
  }
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw std::invalid_argument("threshold must lie in (0, 1]");
  }
  if (gate_error == 0.0 || threshold == 1.0) return 0;  // unbounded flag
  double ratio = std::log(threshold) / std::log1p(-gate_error);
  if (!(ratio < 2e9)) return std::numeric_limits<int>::max();
  return static_cast<int>(std::floor(ratio));
}

ResourcePlan plan_resources(double precision, double lambda, double p_max,
                            double prob0, double prob0_prime) {
  ResourcePlan plan;
  plan.target_precision = precision;
  plan.n_required = copies_required(precision, lambda, p_max);
  plan.q = suppression_factor(lambda, p_max);
  plan.q_n = bound_qn_general(lambda, p_max, plan.n_required);
  plan.f = plan.q > 0.0 ? overhead_exponent(lambda, plan.q) : 0.0;
  plan.shots_a =
      shots_required('A', precision, lambda, plan.n_required, prob0, prob0_prime);
  plan.shots_b =
      shots_required('B', precision, lambda, plan.n_required, prob0).total;
  return plan;
}

ResourcePlan plan_resources(double precision, double lambda, double p_max) {
  int n = copies_required(precision, lambda, p_max);
  double p0 = 0.5 * (1.0 + std::pow(lambda, n));
  return plan_resources(precision, lambda, p_max, p0, p0);
}

std::string resource_plan_to_json(const ResourcePlan& plan) {
  nlohmann::ordered_json j;
  j["epsilon"] = plan.target_precision;
  j["n"] = plan.n_required;
  j["Q"] = plan.q;
  j["Q_n"] = plan.q_n;
  j["f"] = plan.f;
  j["shots_A"] = nlohmann::ordered_json::array(
      {plan.shots_a.ns1, plan.shots_a.ns2});
  j["shots_B"] = plan.shots_b;
  return j.dump(2);
}

double sample_prob(double true_prob, long long n_shots, std::uint64_t seed) {
  check_prob("true_prob", true_prob);
  if (n_shots < 1) throw std::invalid_argument("n_shots must be at least 1");
  std::mt19937_64 rng(seed);
  long long hits = 0;
  for (long long s = 0; s < n_shots; ++s) {
    double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    if (u < true_prob) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(n_shots);
}

Complex pauli_trace(const ComplexMatrix& m, const PauliString& obs) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("pauli_trace needs a square matrix");
  }
  if (m.rows() != (1L << obs.qubits())) {
    throw std::invalid_argument(
        "observable qubit count does not match the matrix dimension");
  }
  unsigned long flip = obs.flip_mask();
  Complex out = 0.0;
  for (long k = 0; k < m.rows(); ++k) {
    unsigned long ku = static_cast<unsigned long>(k);
    out += obs.phase(ku) * m(k, static_cast<long>(ku ^ flip));
  }
  return out;
}

EsdEvaluator::EsdEvaluator(const DensityMatrix& rho, int n_max) {
  if (n_max < 1) throw std::invalid_argument("n_max must be at least 1");
  powers_.reserve(n_max);
  traces_.reserve(n_max);
  powers_.push_back(rho.mat);
  for (int k = 2; k <= n_max; ++k) {
    powers_.push_back(powers_.back() * rho.mat);
  }
  for (const auto& m : powers_) traces_.push_back(m.trace().real());
  sd_ = spectral_data(rho);
}

double EsdEvaluator::prob0(const PauliString& sigma, int n) const {
  if (n < 1 || n > n_max()) {
    throw std::invalid_argument("n is outside the precomputed power range");
  }
  // |tr[sigma rho^n]| <= tr[rho^n] <= 1, so rounding is all that can
  // push the value outside [0, 1]
  return std::clamp(0.5 + 0.5 * pauli_trace(powers_[n - 1], sigma).real(),
                    0.0, 1.0);
}

double EsdEvaluator::prob0_prime(int n) const {
  if (n < 1 || n > n_max()) {
    throw std::invalid_argument("n is outside the precomputed power range");
  }
  return std::clamp(0.5 + 0.5 * traces_[n - 1], 0.0, 1.0);
}

double EsdEvaluator::truth(const PauliString& sigma) const {
  if (sd_.dominant.size() != (1L << sigma.qubits())) {
    throw std::invalid_argument(
        "observable qubit count does not match the state dimension");
  }
  unsigned long flip = sigma.flip_mask();
  Complex out = 0.0;
  for (long k = 0; k < sd_.dominant.size(); ++k) {
    unsigned long ku = static_cast<unsigned long>(k);
    out += std::conj(sd_.dominant(static_cast<long>(ku ^ flip))) *
           sigma.phase(ku) * sd_.dominant(k);
  }
  return out.real();
}

EstimatePair EsdEvaluator::estimates(const PauliString& sigma, int n) const {
  double p0 = prob0(sigma, n);
  double p0p = prob0_prime(n);
  QnBounds qb = bound_qn(sd_.lambda, sd_.p, n);

  EstimatePair pair;
  pair.truth = truth(sigma);
  pair.a = {'A', n, method_a(p0, p0p), p0, p0p, sd_.lambda, qb.bound_a};
  pair.b = {'B', n, method_b(p0, sd_.lambda, n), p0, p0p, sd_.lambda,
            qb.bound_b};
  return pair;
}

}  // namespace esdlab
