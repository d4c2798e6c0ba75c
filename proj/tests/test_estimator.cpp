#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "esdlab/derangement.hpp"
#include "esdlab/estimator.hpp"
#include "esdlab/state.hpp"
#include "helpers.hpp"

using namespace esdlab;

namespace {

// Random spectrum with a dominant eigenvalue, conjugated into a random basis.
DensityMatrix dominated_state(int qubits, double lambda, int n_errors,
                              std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(0.05, 1.0);
  int dim = 1 << qubits;
  RealVector diag = RealVector::Zero(dim);
  diag(0) = lambda;
  std::vector<double> tail(n_errors);
  double sum = 0.0;
  for (auto& t : tail) {
    t = uni(rng);
    sum += t;
  }
  for (int k = 0; k < n_errors; ++k) diag(1 + k) = (1.0 - lambda) * tail[k] / sum;
  ComplexMatrix v = esdlab::testing::random_unitary(dim, rng);
  ComplexMatrix rho =
      v * diag.cast<Complex>().asDiagonal().toDenseMatrix() * v.adjoint();
  return DensityMatrix::checked(qubits, rho);
}

}  // namespace

TEST_SUITE("estimator") {

TEST_CASE("method A is the purified ratio with a guarded denominator") {
  CHECK(method_a(1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(method_a(0.9, 0.8) == doctest::Approx(0.8 / 0.6).epsilon(1e-15));
  CHECK(method_a(0.3, 0.9) == doctest::Approx(-0.5).epsilon(1e-15));

  CHECK_THROWS_AS(method_a(0.9, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(method_a(0.9, 0.2), std::invalid_argument);
  CHECK_THROWS_AS(method_a(1.2, 0.9), std::invalid_argument);
  CHECK_THROWS_AS(method_a(0.9, 1.2), std::invalid_argument);
  CHECK_THROWS_AS(method_a(-0.1, 0.9), std::invalid_argument);
}

TEST_CASE("method B divides out the dominant eigenvalue power") {
  CHECK(method_b(0.75, 0.8, 2) == doctest::Approx(0.5 / 0.64).epsilon(1e-15));

  // single dominant eigenvalue 0.8, 100 uniform errors: tr[rho^3] = 0.5120008
  double prob0 = 0.5 + 0.5 * 0.5120008;
  CHECK(method_b(prob0, 0.8, 3) ==
        doctest::Approx(0.5120008 / 0.512).epsilon(1e-12));
  CHECK(std::abs(method_b(prob0, 0.8, 3) - 1.0) <= 1.5625e-6 + 1e-12);

  // pure state: reduces to 2 prob0 - 1
  CHECK(method_b(0.83, 1.0, 4) == doctest::Approx(2 * 0.83 - 1).epsilon(1e-15));

  CHECK_THROWS_AS(method_b(0.7, 0.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(method_b(0.7, -0.3, 2), std::invalid_argument);
  CHECK_THROWS_AS(method_b(0.7, 1.1, 2), std::invalid_argument);
  CHECK_THROWS_AS(method_b(1.3, 0.8, 2), std::invalid_argument);
  CHECK_THROWS_AS(method_b(0.7, 0.8, 0), std::invalid_argument);
  // lambda^n below 1e-300 is an underflow, not a zero estimate
  CHECK_THROWS_AS(method_b(0.7, 0.5, 1200), std::invalid_argument);
}

TEST_CASE("Q_n bound: norm form, entropy form, and method bounds") {
  std::vector<double> uniform100(100, 0.01);
  QnBounds qb = bound_qn(0.8, uniform100, 3);
  CHECK(qb.q_n == doctest::Approx(1.5625e-6).epsilon(1e-12));
  CHECK(qb.bound_b == qb.q_n);
  CHECK(qb.bound_a ==
        doctest::Approx(2 * qb.q_n / (1 + qb.q_n)).epsilon(1e-15));

  // lambda = 1/2 leaves a unit prefactor
  std::vector<double> p = {0.5, 0.3, 0.2};
  CHECK(bound_qn(0.5, p, 2).q_n ==
        doctest::Approx(0.25 + 0.09 + 0.04).epsilon(1e-14));

  // entropy form: Q_n = (1/lambda - 1)^n exp[-(n-1) H_n]
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uni(0.01, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> q(6);
    double sum = 0.0;
    for (auto& x : q) {
      x = uni(rng);
      sum += x;
    }
    for (auto& x : q) x /= sum;
    double lambda = 0.55 + 0.4 * uni(rng);
    for (int n = 2; n <= 6; ++n) {
      double hn = renyi_entropy(q, n);
      double entropy_form =
          std::pow(1.0 / lambda - 1.0, n) * std::exp(-(n - 1.0) * hn);
      CHECK(bound_qn(lambda, q, n).q_n ==
            doctest::Approx(entropy_form).epsilon(1e-12));
    }
  }

  // empty error support: perfectly pure, all bounds vanish
  CHECK(bound_qn(0.9, {}, 3).q_n == 0.0);

  std::vector<double> bad_neg = {0.5, -0.1};
  std::vector<double> bad_sum = {0.8, 0.7};
  CHECK_THROWS_AS(bound_qn(0.8, bad_neg, 2), std::invalid_argument);
  CHECK_THROWS_AS(bound_qn(0.8, bad_sum, 2), std::invalid_argument);
  CHECK_THROWS_AS(bound_qn(0.0, p, 2), std::invalid_argument);
  CHECK_THROWS_AS(bound_qn(1.2, p, 2), std::invalid_argument);
  CHECK_THROWS_AS(bound_qn(0.8, p, 0), std::invalid_argument);
}

TEST_CASE("general bound dominates the entropy form") {
  CHECK(bound_qn_general(0.5, 0.1, 2) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(suppression_factor(0.51, 0.026) ==
        doctest::Approx((1.0 / 0.51 - 1.0) * 0.026).epsilon(1e-15));
  CHECK(suppression_factor(0.51, 0.026) == doctest::Approx(0.0250).epsilon(2e-3));

  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> uni(0.01, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    int k = 2 + static_cast<int>(uni(rng) * 7);
    std::vector<double> p(k);
    double sum = 0.0;
    for (auto& x : p) {
      x = uni(rng);
      sum += x;
    }
    for (auto& x : p) x /= sum;
    double p_max = *std::max_element(p.begin(), p.end());
    double lambda = 0.55 + 0.4 * uni(rng);
    for (int n = 1; n <= 6; ++n) {
      double entropy = bound_qn(lambda, p, n).q_n;
      double general = bound_qn_general(lambda, p_max, n);
      CHECK(general >= entropy - 1e-15 * std::max(1.0, general));
    }
  }

  CHECK_THROWS_AS(bound_qn_general(0.8, 0.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(bound_qn_general(0.8, 1.1, 2), std::invalid_argument);
  CHECK_THROWS_AS(bound_qn_general(0.0, 0.1, 2), std::invalid_argument);
  CHECK_THROWS_AS(bound_qn_general(0.8, 0.1, 0), std::invalid_argument);
}

TEST_CASE("Q_n decreases strictly in n while Q < 1") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> p(5);
    double sum = 0.0;
    for (auto& x : p) {
      x = 0.05 + uni(rng);
      sum += x;
    }
    for (auto& x : p) x /= sum;
    double lambda = 0.55 + 0.4 * uni(rng);
    double p_max = *std::max_element(p.begin(), p.end());
    REQUIRE(suppression_factor(lambda, p_max) < 1.0);
    double prev = bound_qn(lambda, p, 1).q_n;
    for (int n = 2; n <= 6; ++n) {
      double cur = bound_qn(lambda, p, n).q_n;
      CHECK(cur < prev);
      prev = cur;
    }
  }
}

TEST_CASE("effective bound for commuting non-identical copies") {
  // identical copies reduce to bound_qn
  std::vector<double> p = {0.4, 0.35, 0.25};
  for (int n = 1; n <= 4; ++n) {
    CHECK(bound_qn_effective(0.8, p, n) ==
          doctest::Approx(bound_qn(0.8, p, n).q_n).epsilon(1e-14));
  }

  // commuting perturbed copies: spectral estimate error <= Q_n^eff
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const int qubits = 4;
  const int dim = 1 << qubits;
  const int copies = 3;
  const int n_err = 5;
  int violations = 0;
  for (int trial = 0; trial < 15; ++trial) {
    ComplexMatrix v = esdlab::testing::random_unitary(dim, rng);
    std::vector<double> base(n_err);
    double bsum = 0.0;
    for (auto& b : base) {
      b = 0.2 + uni(rng);
      bsum += b;
    }
    std::vector<DensityMatrix> rhos;
    std::vector<double> lambdas;
    std::vector<double> p_elem_max(n_err, 0.0);
    for (int j = 0; j < copies; ++j) {
      double lambda = 0.72 + 0.16 * uni(rng);
      RealVector diag = RealVector::Zero(dim);
      diag(0) = lambda;
      std::vector<double> tail(n_err);
      double tsum = 0.0;
      for (int k = 0; k < n_err; ++k) {
        tail[k] = base[k] * (0.9 + 0.2 * uni(rng));
        tsum += tail[k];
      }
      for (int k = 0; k < n_err; ++k) {
        double pk = tail[k] / tsum;
        diag(1 + k) = (1.0 - lambda) * pk;
        p_elem_max[k] = std::max(p_elem_max[k], pk);
      }
      ComplexMatrix rho =
          v * diag.cast<Complex>().asDiagonal().toDenseMatrix() * v.adjoint();
      rhos.push_back(DensityMatrix::checked(qubits, rho));
      lambdas.push_back(lambda);
    }
    double lambda_min = *std::min_element(lambdas.begin(), lambdas.end());
    double q_eff = bound_qn_effective(lambda_min, p_elem_max, copies);
    double lambda_prod = lambdas[0] * lambdas[1] * lambdas[2];
    ComplexVector psi = v.col(0);
    for (int t = 0; t < 10; ++t) {
      PauliString sigma = random_pauli(qubits, rng);
      Complex truth = 0.0;
      unsigned long flip = sigma.flip_mask();
      for (int k = 0; k < dim; ++k) {
        unsigned long ku = static_cast<unsigned long>(k);
        truth += std::conj(psi(static_cast<int>(ku ^ flip))) *
                 sigma.phase(ku) * psi(k);
      }
      double prob0 = prob0_fast(rhos, sigma);
      double est = (2.0 * prob0 - 1.0) / lambda_prod;
      if (std::abs(est - truth.real()) > q_eff + 1e-12) ++violations;
    }
  }
  CHECK(violations == 0);

  CHECK_THROWS_AS(bound_qn_effective(0.0, p, 2), std::invalid_argument);
  std::vector<double> bad = {0.5, 1.2};
  CHECK_THROWS_AS(bound_qn_effective(0.8, bad, 2), std::invalid_argument);
}

TEST_CASE("generic non-identical copies only give an order estimate") {
  GenericNonIdenticalBound g = bound_generic_nonidentical(0.6, 4);
  CHECK(g.scale == doctest::Approx(std::pow(2.0 / 3.0, 4)).epsilon(1e-14));
  CHECK(g.exponential_guarantee);

  CHECK_FALSE(bound_generic_nonidentical(0.5, 3).exponential_guarantee);
  CHECK_FALSE(bound_generic_nonidentical(0.4, 2).exponential_guarantee);
  CHECK(bound_generic_nonidentical(0.4, 2).scale ==
        doctest::Approx(2.25).epsilon(1e-14));

  CHECK_THROWS_AS(bound_generic_nonidentical(0.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(bound_generic_nonidentical(1.2, 2), std::invalid_argument);
  CHECK_THROWS_AS(bound_generic_nonidentical(0.6, 0), std::invalid_argument);
}

TEST_CASE("copies required for a target precision") {
  // ceil[(ln 1e6 + ln(2/0.026)) / ln(1/Q)] with Q = (1/0.51 - 1) 0.026
  CHECK(copies_required(1e-6, 0.51, 0.026) == 5);
  double q = suppression_factor(0.51, 0.026);
  double exact = (std::log(1e6) + std::log(2.0 / 0.026)) / std::log(1.0 / q);
  CHECK(exact == doctest::Approx(4.92).epsilon(2e-3));

  // coarse precision clamps to the minimum of two copies
  CHECK(copies_required(10.0, 0.51, 0.026) == 2);
  CHECK(copies_required(1000.0, 0.51, 0.026) == 2);

  int prev = 2;
  for (double eps : {1e-1, 1e-2, 1e-4, 1e-6, 1e-8, 1e-10}) {
    int n = copies_required(eps, 0.51, 0.026);
    CHECK(n >= prev);
    prev = n;
  }

  // Q >= 1: suppression impossible
  CHECK_THROWS_AS(copies_required(1e-6, 0.4, 0.9), std::invalid_argument);
  CHECK_THROWS_AS(copies_required(1e-6, 0.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(copies_required(0.0, 0.51, 0.026), std::invalid_argument);
  CHECK_THROWS_AS(copies_required(1e-6, 0.51, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(copies_required(1e-6, 1.2, 0.026), std::invalid_argument);
}

TEST_CASE("overhead exponent") {
  CHECK(overhead_exponent(1e-6, 0.5) ==
        doctest::Approx(std::log(1e6) / std::log(2.0)).epsilon(1e-15));
  CHECK(overhead_exponent(1e-6, 0.5) == doctest::Approx(19.93).epsilon(0.0026));
  CHECK(std::abs(overhead_exponent(1e-6, 0.5) - 19.93) < 0.05);
  CHECK(std::abs(overhead_exponent(0.51, 0.026) - 0.18) < 0.01);
  CHECK(overhead_exponent(1.0, 0.3) == 0.0);

  CHECK_THROWS_AS(overhead_exponent(0.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(overhead_exponent(0.8, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(overhead_exponent(0.8, 1.0), std::invalid_argument);
}

TEST_CASE("shot budgets per method") {
  ShotCounts b = shots_required('B', 0.01, 0.8, 2, 0.75);
  CHECK(b.ns1 == 18311);
  CHECK(b.ns2 == 0);
  CHECK(b.total == 18311);
  CHECK(shots_required('b', 0.01, 0.8, 2, 0.75).total == 18311);

  // method A splits the precision between the two estimates
  double eps = 0.01, lambda = 0.9, p = 0.8, pp = 0.7;
  int n = 2;
  ShotCounts a = shots_required('A', eps, lambda, n, p, pp);
  long long ns1 = static_cast<long long>(
      std::ceil(8 * p * (1 - p) / (eps * eps * std::pow(lambda, 2 * n))));
  long long ns2 = static_cast<long long>(
      std::ceil(8 * pp * (1 - pp) * (2 * p - 1) * (2 * p - 1) /
                (eps * eps * std::pow(lambda, 4 * n))));
  CHECK(a.ns1 == ns1);
  CHECK(a.ns2 == ns2);
  CHECK(a.total == ns1 + ns2);

  // lambda = 1 recovers the standard shot-noise limit
  CHECK(shots_required('B', 0.01, 1.0, 3, 0.75).total ==
        static_cast<long long>(std::ceil(4 * 0.75 * 0.25 / 1e-4)));

  // zero-variance edge still books one shot
  CHECK(shots_required('B', 0.01, 0.9, 2, 1.0).total == 1);

  CHECK_THROWS_AS(shots_required('C', 0.01, 0.8, 2, 0.75), std::invalid_argument);
  CHECK_THROWS_AS(shots_required('B', 0.0, 0.8, 2, 0.75), std::invalid_argument);
  CHECK_THROWS_AS(shots_required('B', 0.01, 0.8, 0, 0.75), std::invalid_argument);
  CHECK_THROWS_AS(shots_required('B', 0.01, 0.8, 2, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(shots_required('B', 0.01, 0.5, 600, 0.75),
                  std::invalid_argument);
}

TEST_CASE("booked shots actually deliver the target precision") {
  // estimator deviation stays within 2 epsilon in at least 95% of trials
  double eps = 0.02, lambda = 0.9, p_true = 0.7;
  int n = 2;
  long long shots = shots_required('B', eps, lambda, n, p_true).total;
  double truth = method_b(p_true, lambda, n);
  int within = 0;
  double sum = 0.0, sumsq = 0.0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    double est = method_b(sample_prob(p_true, shots, 2026 + t), lambda, n);
    if (std::abs(est - truth) <= 2 * eps) ++within;
    sum += est;
    sumsq += est * est;
  }
  CHECK(within >= 190);
  double sample_std = std::sqrt((sumsq - sum * sum / trials) / (trials - 1));
  CHECK(sample_std <= 1.1 * eps);
  CHECK(sample_std >= 0.8 * eps);
}

TEST_CASE("sample_prob is a seeded binomial frequency") {
  CHECK(sample_prob(0.5, 4, 42) == sample_prob(0.5, 4, 42));
  double v = sample_prob(0.5, 4, 7);
  CHECK(4.0 * v == std::floor(4.0 * v));
  CHECK(v >= 0.0);
  CHECK(v <= 1.0);

  CHECK(sample_prob(1.0, 1000, 3) == 1.0);
  CHECK(sample_prob(0.0, 1000, 3) == 0.0);

  // 2e6 draws land within 3 sigma of the true probability
  double freq = sample_prob(0.3, 2000000, 2026);
  CHECK(std::abs(freq - 0.3) <= 3.0 * std::sqrt(0.3 * 0.7 / 2000000.0));

  CHECK_THROWS_AS(sample_prob(0.5, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_prob(-0.1, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_prob(1.1, 10, 1), std::invalid_argument);
}

TEST_CASE("attenuation qubit limit") {
  CHECK(attenuation_qubit_limit(1e-3, 0.1) == 2301);
  CHECK(attenuation_qubit_limit(0.01, 0.1) == 229);
  // threshold 1 (or a perfect gate) imposes no finite limit: flag 0
  CHECK(attenuation_qubit_limit(1e-3, 1.0) == 0);
  CHECK(attenuation_qubit_limit(0.0, 0.1) == 0);

  CHECK_THROWS_AS(attenuation_qubit_limit(-0.1, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(attenuation_qubit_limit(1.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(attenuation_qubit_limit(1e-3, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(attenuation_qubit_limit(1e-3, 1.1), std::invalid_argument);
}

TEST_CASE("resource plan and its JSON report") {
  ResourcePlan plan = plan_resources(1e-6, 0.51, 0.026);
  CHECK(plan.n_required == 5);
  CHECK(plan.q == doctest::Approx(suppression_factor(0.51, 0.026)).epsilon(1e-15));
  CHECK(plan.q_n ==
        doctest::Approx(bound_qn_general(0.51, 0.026, 5)).epsilon(1e-15));
  CHECK(plan.f ==
        doctest::Approx(overhead_exponent(0.51, plan.q)).epsilon(1e-15));
  CHECK(plan.q < 1.0);
  CHECK(plan.f >= 0.0);
  CHECK(plan.shots_a.ns1 >= 1);
  CHECK(plan.shots_a.ns2 >= 1);
  CHECK(plan.shots_b >= 1);

  // default operating point prob0 = prob0' = (1 + lambda^n)/2
  double p0 = 0.5 * (1.0 + std::pow(0.51, 5));
  ShotCounts a = shots_required('A', 1e-6, 0.51, 5, p0, p0);
  CHECK(plan.shots_a.ns1 == a.ns1);
  CHECK(plan.shots_a.ns2 == a.ns2);
  CHECK(plan.shots_b == shots_required('B', 1e-6, 0.51, 5, p0).total);

  // explicit operating point
  ResourcePlan expl = plan_resources(1e-3, 0.8, 0.1, 0.9, 0.8);
  int n = copies_required(1e-3, 0.8, 0.1);
  CHECK(expl.n_required == n);
  CHECK(expl.shots_b == shots_required('B', 1e-3, 0.8, n, 0.9).total);
  CHECK(expl.shots_a.ns2 ==
        shots_required('A', 1e-3, 0.8, n, 0.9, 0.8).ns2);

  nlohmann::json j = nlohmann::json::parse(resource_plan_to_json(plan));
  CHECK(j.at("epsilon").get<double>() == 1e-6);
  CHECK(j.at("n").get<int>() == 5);
  CHECK(j.at("Q").get<double>() == doctest::Approx(plan.q).epsilon(1e-15));
  CHECK(j.at("Q_n").get<double>() == doctest::Approx(plan.q_n).epsilon(1e-15));
  CHECK(j.at("f").get<double>() == doctest::Approx(plan.f).epsilon(1e-15));
  REQUIRE(j.at("shots_A").is_array());
  REQUIRE(j.at("shots_A").size() == 2);
  CHECK(j.at("shots_A")[0].get<long long>() == plan.shots_a.ns1);
  CHECK(j.at("shots_A")[1].get<long long>() == plan.shots_a.ns2);
  CHECK(j.at("shots_B").get<long long>() == plan.shots_b);
}

TEST_CASE("pauli_trace matches the dense contraction") {
  std::mt19937_64 rng(53);
  ComplexMatrix m = esdlab::testing::random_matrix(8, 8, rng);
  for (const char* s : {"XIZ", "YYI", "ZZZ", "III", "XYZ"}) {
    PauliString sigma(s);
    Complex dense = (sigma.matrix() * m).trace();
    Complex fast = pauli_trace(m, sigma);
    CHECK(std::abs(fast - dense) < 1e-12);
  }

  CHECK_THROWS_AS(pauli_trace(m, PauliString("XX")), std::invalid_argument);
  ComplexMatrix rect = esdlab::testing::random_matrix(8, 4, rng);
  CHECK_THROWS_AS(pauli_trace(rect, PauliString("XIZ")), std::invalid_argument);
}

TEST_CASE("evaluator agrees with the fast trace formula") {
  std::mt19937_64 rng(61);
  DensityMatrix rho = esdlab::testing::random_density(3, rng);
  EsdEvaluator ev(rho, 4);
  for (int t = 0; t < 10; ++t) {
    PauliString sigma = random_pauli(3, rng);
    for (int n = 1; n <= 4; ++n) {
      CHECK(ev.prob0(sigma, n) ==
            doctest::Approx(prob0_fast(rho, n, sigma)).epsilon(1e-12));
      CHECK(ev.prob0_prime(n) ==
            doctest::Approx(prob0_fast(rho, n, sigma, false)).epsilon(1e-12));
    }
  }

  EstimatePair pair = ev.estimates(random_pauli(3, rng), 3);
  CHECK(pair.a.method == 'A');
  CHECK(pair.b.method == 'B');
  CHECK(pair.a.n == 3);
  CHECK(pair.a.value ==
        doctest::Approx(method_a(pair.a.prob0, pair.a.prob0_prime))
            .epsilon(1e-15));
  CHECK(pair.b.value ==
        doctest::Approx(method_b(pair.b.prob0, pair.b.lambda, 3))
            .epsilon(1e-15));

  CHECK_THROWS_AS(EsdEvaluator(rho, 0), std::invalid_argument);
  CHECK_THROWS_AS(ev.estimates(random_pauli(3, rng), 5), std::invalid_argument);
  CHECK_THROWS_AS(ev.prob0(PauliString("XX"), 2), std::invalid_argument);
}

TEST_CASE("zero-entropy fixture saturates both method bounds") {
  // rho = 0.8 |0><0| + 0.2 |1><1|, sigma = Z, n = 3
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 0.8;
  d(1, 1) = 0.2;
  DensityMatrix rho = DensityMatrix::checked(1, d);
  EsdEvaluator ev(rho, 3);

  const SpectralData& sd = ev.spectral();
  CHECK(sd.lambda == doctest::Approx(0.8).epsilon(1e-14));
  REQUIRE(sd.p.size() == 1);
  CHECK(sd.p[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sd.purity_power(3) == doctest::Approx(0.52).epsilon(1e-12));
  // dominant and error weights 0.512 and 0.008
  CHECK(std::pow(sd.lambda, 3) == doctest::Approx(0.512).epsilon(1e-12));
  CHECK(sd.purity_power(3) - std::pow(sd.lambda, 3) ==
        doctest::Approx(0.008).epsilon(1e-10));

  EstimatePair pair = ev.estimates(PauliString("Z"), 3);
  CHECK(pair.truth == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pair.a.prob0 == doctest::Approx(0.752).epsilon(1e-13));
  CHECK(pair.a.prob0_prime == doctest::Approx(0.76).epsilon(1e-13));
  CHECK(pair.a.value == doctest::Approx(0.504 / 0.520).epsilon(1e-12));

  // the aligned error vector saturates both bounds exactly
  double err_a = std::abs(pair.a.value - pair.truth);
  double err_b = std::abs(pair.b.value - pair.truth);
  CHECK(pair.b.bound == doctest::Approx(0.015625).epsilon(1e-12));
  CHECK(err_a == doctest::Approx(pair.a.bound).epsilon(1e-10));
  CHECK(err_b == doctest::Approx(pair.b.bound).epsilon(1e-10));
  CHECK(err_a <= pair.a.bound + 1e-12);
  CHECK(err_b <= pair.b.bound + 1e-12);
}

TEST_CASE("method B on the identity reduces to the purity identity") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 5; ++trial) {
    DensityMatrix rho = esdlab::testing::noisy_fixture(3, 0.75, 4, rng);
    EsdEvaluator ev(rho, 4);
    double lambda = ev.spectral().lambda;
    for (int n = 2; n <= 4; ++n) {
      double err = method_b(ev.prob0_prime(n), lambda, n) - 1.0;
      double identity = (ev.spectral().purity_power(n) - std::pow(lambda, n)) /
                        std::pow(lambda, n);
      CHECK(err == doctest::Approx(identity).epsilon(1e-10));
    }
  }
}

TEST_CASE("spectral-path errors never exceed the bounds") {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  int bad_a = 0, bad_b = 0, bad_mag = 0;
  for (int s = 0; s < 50; ++s) {
    int qubits = 4 + static_cast<int>(uni(rng) * 3.0);
    if (qubits > 6) qubits = 6;
    double lambda = 0.55 + 0.4 * uni(rng);
    int n_err = 2 + static_cast<int>(uni(rng) * 8.0);
    DensityMatrix rho = dominated_state(qubits, lambda, n_err, rng);
    EsdEvaluator ev(rho, 4);
    REQUIRE(ev.spectral().dominant_ok);
    for (int t = 0; t < 500; ++t) {
      PauliString sigma = random_pauli(qubits, rng);
      for (int n = 1; n <= 4; ++n) {
        EstimatePair pair = ev.estimates(sigma, n);
        if (std::abs(pair.a.value - pair.truth) > pair.a.bound + 1e-12) ++bad_a;
        if (std::abs(pair.b.value - pair.truth) > pair.b.bound + 1e-12) ++bad_b;
        if (std::abs(pair.a.value) > 1.0 + pair.a.bound + 1e-12) ++bad_mag;
        if (std::abs(pair.b.value) > 1.0 + pair.b.bound + 1e-12) ++bad_mag;
      }
    }
  }
  CHECK(bad_a == 0);
  CHECK(bad_b == 0);
  CHECK(bad_mag == 0);
}

}  // TEST_SUITE
