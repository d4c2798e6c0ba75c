#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "esdlab/channels.hpp"

namespace esdlab {

struct NoisePoint {
  double eps = 0.0;
  double value = 0.0;
  long long shots = 0;  // 0 means an exact (shot-free) evaluation
};

/// Expectation values sampled at increasing error probabilities; nu is the
/// noisy-gate count of the underlying circuit (one probabilistic channel
/// per gate).
struct NoiseScaleSeries {
  std::vector<NoisePoint> points;
  int nu = 0;

  /// Enforces eps >= 0, strictly increasing, at least one point.
  static NoiseScaleSeries validated(std::vector<NoisePoint> points, int nu);
};

enum class FitKind { linear, poly, exact_interp, pade33 };
const char* fit_kind_name(FitKind kind);

struct FitResult {
  FitKind kind = FitKind::linear;
  int degree = 1;
  double zero_noise_value = 0.0;
  std::vector<double> coefficients;  // monomial basis, or a0..a5 for pade33
  std::vector<double> fitted;        // model values at the input points
  double residual = 0.0;             // rms misfit over the input points
};

/// Least-squares polynomial in eps; zero_noise_value is the constant term.
/// Throws with a condition estimate when the design matrix is
/// ill-conditioned (> 1e12 after scaling).
FitResult fit_polynomial(const NoiseScaleSeries& series, int degree);

/// Newton interpolation through exactly nu+1 points with distinct eps
/// (any order); expectation values of a circuit with nu probabilistic
/// noisy gates depend on eps as a degree-nu polynomial, so this recovers
/// the zero-noise value exactly up to arithmetic.
FitResult fit_exact(const NoiseScaleSeries& series);

/// a0 + (a1 e + a2 e^2 + a3 e^3)/(1 + a4 e + a5 e^2), fitted by linearized
/// rational least squares then damped Gauss-Newton refinement (cap 200
/// iterations, step halved while the residual increases).  A denominator
/// root inside [0, max eps] rejects the fit.
FitResult fit_pade33(const NoiseScaleSeries& series);

/// Model value at eps for any fit kind.
double evaluate_fit(const FitResult& fit, double eps);

/// Scales every amplifiable noise entry by `factor` (> 0); non-amplifiable
/// entries pass through.  Scaled probabilities must stay within [0, 1].
NoiseModel amplify(const NoiseModel& nm, double factor);

/// The default protocol grid: `points` evenly spaced values spanning
/// [eps_base, 2*eps_base].
std::vector<double> default_eps_grid(double eps_base, int points = 6);

/// Evaluates the circuit proxy on the grid, fits, and returns the result
/// (per-point fitted values included).  `degree` only applies to poly.
/// A single-point grid degenerates to the constant.
FitResult zne_pipeline(const std::function<double(double)>& evaluate,
                       std::span<const double> eps_grid, FitKind kind,
                       int degree = 3);

/// CSV with header eps,value,fitted,residual; one row per point.
std::string fit_to_csv(const NoiseScaleSeries& series, const FitResult& fit);
std::string fit_to_json(const FitResult& fit);

}  // namespace esdlab
