#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "esdlab/state.hpp"

namespace esdlab {

/// Method A point estimate (2 prob0 - 1)/(2 prob0' - 1); the denominator
/// must be positive.
double method_a(double prob0, double prob0_prime);

/// Method B point estimate (2 prob0 - 1)/lambda^n for known dominant
/// eigenvalue lambda in (0, 1].
double method_b(double prob0, double lambda, int n);

/// Suppression factor Q = (1/lambda - 1) p_max.
double suppression_factor(double lambda, double p_max);

/// Q_n = (1/lambda - 1)^n sum_k p_k^n together with the derived method
/// bounds |E_B| <= Q_n and |E_A| <= 2 Q_n / (1 + Q_n).
struct QnBounds {
  double q_n = 0.0;
  double bound_a = 0.0;
  double bound_b = 0.0;
};
QnBounds bound_qn(double lambda, std::span<const double> p, int n);

/// Spectrum-free bound Q_n <= (1/lambda - 1)^n p_max^{n-1}.
double bound_qn_general(double lambda, double p_max, int n);

/// Commuting non-identical copies: (1/lambda_min - 1)^n sum_k (p_k,max)^n
/// with elementwise-maximal error probabilities.
double bound_qn_effective(double lambda_min,
                          std::span<const double> p_max_elementwise, int n);

/// Non-commuting copies only admit an order estimate C (1/lambda_min-1)^n
/// with an unspecified constant; the exponential guarantee needs
/// lambda_min > 1/2.
struct GenericNonIdenticalBound {
  double scale = 0.0;               // (1/lambda_min - 1)^n, constant elided
  bool exponential_guarantee = false;
};
GenericNonIdenticalBound bound_generic_nonidentical(double lambda_min, int n);

/// Copies needed for |E| <= precision:
/// ceil[(ln 1/precision + ln(2/p_max)) / ln(1/Q)], at least 2.
int copies_required(double precision, double lambda, double p_max);

/// f = ln(1/lambda) / ln(1/Q): shots scale as precision^{-2(1+f)}.
double overhead_exponent(double lambda, double q);

/// Shot budget; method 'B' fills ns1 = total, method 'A' splits the
/// precision between the prob0 and prob0' estimates.
struct ShotCounts {
  long long ns1 = 0;
  long long ns2 = 0;
  long long total = 0;
};
ShotCounts shots_required(char method, double precision, double lambda,
                          int n, double prob0, double prob0_prime = 0.5);

/// Largest N(n-1) with (1-gate_error)^{N(n-1)} >= threshold, i.e.
/// floor[ln(threshold)/ln(1-gate_error)].  Returns 0 (the unbounded flag)
/// when threshold = 1 or gate_error = 0 imposes no finite limit.
int attenuation_qubit_limit(double gate_error, double threshold);

/// Resource summary for a target precision.
struct ResourcePlan {
  double target_precision = 0.0;
  int n_required = 2;
  double q = 0.0;
  double q_n = 0.0;
  double f = 0.0;
  ShotCounts shots_a;
  long long shots_b = 0;
};
/// Plans with the sigma-independent default prob0 = prob0' = (1+lambda^n)/2.
ResourcePlan plan_resources(double precision, double lambda, double p_max);
ResourcePlan plan_resources(double precision, double lambda, double p_max,
                            double prob0, double prob0_prime);
std::string resource_plan_to_json(const ResourcePlan& plan);

/// Deterministic binomial frequency: n_shots Bernoulli(true_prob) draws.
double sample_prob(double true_prob, long long n_shots, std::uint64_t seed);

/// tr[obs * m] in O(dim) using the Pauli string's action on basis states.
Complex pauli_trace(const ComplexMatrix& m, const PauliString& obs);

struct EsdEstimate {
  char method = 'B';
  int n = 1;
  double value = 0.0;        // estimate of <psi|sigma|psi>
  double prob0 = 0.0;
  double prob0_prime = 0.0;  // Method A denominator input
  double lambda = 0.0;       // Method B divisor input
  double bound = 0.0;        // applicable |E| bound (spectrum form)
};

struct EstimatePair {
  EsdEstimate a;
  EsdEstimate b;
  double truth = 0.0;        // <dominant|sigma|dominant>
};

/// Noiseless spectral evaluator: precomputes rho^1..rho^n_max so each
/// observable costs O(dim).
class EsdEvaluator {
 public:
  EsdEvaluator(const DensityMatrix& rho, int n_max);

  const SpectralData& spectral() const { return sd_; }
  int n_max() const { return static_cast<int>(powers_.size()); }

  double prob0(const PauliString& sigma, int n) const;
  double prob0_prime(int n) const;
  double truth(const PauliString& sigma) const;
  EstimatePair estimates(const PauliString& sigma, int n) const;

 private:
  std::vector<ComplexMatrix> powers_;  // powers_[k-1] = rho^k
  std::vector<double> traces_;         // traces_[k-1] = tr[rho^k]
  SpectralData sd_;
};

}  // namespace esdlab
