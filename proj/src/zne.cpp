#include "esdlab/zne.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <json.hpp>

namespace esdlab {

namespace {

[[noreturn]] void fail(const std::string& msg) {
  throw std::invalid_argument("zne: " + msg);
}

double rms(const std::vector<double>& fitted, const std::vector<double>& values) {
  double ss = 0.0;
  for (std::size_t i = 0; i < fitted.size(); ++i) {
    double d = fitted[i] - values[i];
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(fitted.size()));
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// a0 + (a1 e + a2 e^2 + a3 e^3) / (1 + a4 e + a5 e^2)
double pade_value(const std::vector<double>& a, double e) {
  double num = e * (a[1] + e * (a[2] + e * a[3]));
  double den = 1.0 + e * (a[4] + e * a[5]);
  return a[0] + num / den;
}

}  // namespace

NoiseScaleSeries NoiseScaleSeries::validated(std::vector<NoisePoint> points,
                                             int nu) {
  if (points.empty()) fail("a noise-scaling series needs at least one point");
  if (nu < 0) fail("nu must be non-negative");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(points[i].eps >= 0.0)) fail("error rates must be non-negative");
    if (i > 0 && !(points[i].eps > points[i - 1].eps))
      fail("error rates must be strictly increasing");
  }
  NoiseScaleSeries s;
  s.points = std::move(points);
  s.nu = nu;
  return s;
}

const char* fit_kind_name(FitKind kind) {
  switch (kind) {
    case FitKind::linear: return "linear";
    case FitKind::poly: return "poly";
    case FitKind::exact_interp: return "exact_interp";
    case FitKind::pade33: return "pade33";
  }
  return "unknown";
}

FitResult fit_polynomial(const NoiseScaleSeries& series, int degree) {
  const auto& pts = series.points;
  const int m = static_cast<int>(pts.size());
  if (degree < 0) fail("polynomial degree must be non-negative");
  if (degree > m - 1)
    fail("polynomial degree exceeds the number of points minus one");

  double scale = 0.0;
  for (const auto& p : pts) scale = std::max(scale, std::abs(p.eps));
  if (scale == 0.0) scale = 1.0;

  Eigen::MatrixXd v(m, degree + 1);
  Eigen::VectorXd y(m);
  for (int i = 0; i < m; ++i) {
    double x = pts[i].eps / scale;
    double pw = 1.0;
    for (int j = 0; j <= degree; ++j) {
      v(i, j) = pw;
      pw *= x;
    }
    y(i) = pts[i].value;
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(v, Eigen::ComputeThinU |
                                               Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  double cond = sv(sv.size() - 1) > 0.0
                    ? sv(0) / sv(sv.size() - 1)
                    : std::numeric_limits<double>::infinity();
  if (!(cond < 1e12)) {
    std::ostringstream msg;
    msg << "zne: polynomial design matrix is ill-conditioned (condition "
           "estimate "
        << cond << ")";
    throw std::runtime_error(msg.str());
  }
  Eigen::VectorXd b = svd.solve(y);

  FitResult fit;
  fit.kind = degree == 1 ? FitKind::linear : FitKind::poly;
  fit.degree = degree;
  fit.coefficients.resize(degree + 1);
  double unscale = 1.0;
  for (int j = 0; j <= degree; ++j) {
    fit.coefficients[j] = b(j) / unscale;
    unscale *= scale;
  }
  fit.zero_noise_value = fit.coefficients[0];
  Eigen::VectorXd model = v * b;
  fit.fitted.assign(model.data(), model.data() + m);
  std::vector<double> values(y.data(), y.data() + m);
  fit.residual = rms(fit.fitted, values);
  return fit;
}

FitResult fit_exact(const NoiseScaleSeries& series) {
  const auto& pts = series.points;
  const int m = static_cast<int>(pts.size());
  if (m != series.nu + 1)
    fail("exact interpolation needs exactly nu + 1 points");
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if (pts[i].eps == pts[j].eps)
        fail("exact interpolation needs distinct error rates");

  // Newton divided differences in input order
  std::vector<double> x(m), dd(m);
  for (int i = 0; i < m; ++i) {
    x[i] = pts[i].eps;
    dd[i] = pts[i].value;
  }
  for (int level = 1; level < m; ++level) {
    for (int i = m - 1; i >= level; --i) {
      dd[i] = (dd[i] - dd[i - 1]) / (x[i] - x[i - level]);
    }
  }
  auto newton_eval = [&](double e) {
    double out = dd[m - 1];
    for (int i = m - 2; i >= 0; --i) out = out * (e - x[i]) + dd[i];
    return out;
  };

  // expand to the monomial basis
  std::vector<double> coeff(m, 0.0);
  coeff[0] = dd[m - 1];
  int used = 1;
  for (int i = m - 2; i >= 0; --i) {
    // multiply by (e - x[i]) then add dd[i]
    for (int j = used; j >= 1; --j) coeff[j] = coeff[j - 1] - x[i] * coeff[j];
    coeff[0] = -x[i] * coeff[0] + dd[i];
    ++used;
  }

  FitResult fit;
  fit.kind = FitKind::exact_interp;
  fit.degree = series.nu;
  fit.coefficients = std::move(coeff);
  fit.zero_noise_value = newton_eval(0.0);
  fit.fitted.resize(m);
  std::vector<double> values(m);
  for (int i = 0; i < m; ++i) {
    fit.fitted[i] = newton_eval(x[i]);
    values[i] = pts[i].value;
  }
  fit.residual = rms(fit.fitted, values);
  return fit;
}

FitResult fit_pade33(const NoiseScaleSeries& series) {
  const auto& pts = series.points;
  const int m = static_cast<int>(pts.size());
  if (m < 6) fail("the rational fit needs at least six points");

  double scale = 0.0;
  for (const auto& p : pts) scale = std::max(scale, std::abs(p.eps));
  if (scale == 0.0) scale = 1.0;
  std::vector<double> x(m), y(m);
  for (int i = 0; i < m; ++i) {
    x[i] = pts[i].eps / scale;
    y[i] = pts[i].value;
  }

  // linearized system: E = d0 + d1 x + d2 x^2 + d3 x^3 - a4 xE - a5 x^2 E
  Eigen::MatrixXd a(m, 6);
  Eigen::VectorXd rhs(m);
  for (int i = 0; i < m; ++i) {
    a(i, 0) = 1.0;
    a(i, 1) = x[i];
    a(i, 2) = x[i] * x[i];
    a(i, 3) = x[i] * x[i] * x[i];
    a(i, 4) = -x[i] * y[i];
    a(i, 5) = -x[i] * x[i] * y[i];
    rhs(i) = y[i];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU |
                                               Eigen::ComputeThinV);
  svd.setThreshold(1e-12);
  Eigen::VectorXd d = svd.solve(rhs);

  // recover the rational parameters (scaled coordinates)
  Eigen::VectorXd p(6);
  p(0) = d(0);
  p(4) = d(4);
  p(5) = d(5);
  p(1) = d(1) - p(0) * p(4);
  p(2) = d(2) - p(0) * p(5);
  p(3) = d(3);

  auto model = [&](const Eigen::VectorXd& q, double xx, double* den_out) {
    double num = xx * (q(1) + xx * (q(2) + xx * q(3)));
    double den = 1.0 + xx * (q(4) + xx * q(5));
    if (den_out) *den_out = den;
    return q(0) + num / den;
  };
  auto ssr_of = [&](const Eigen::VectorXd& q) {
    double ss = 0.0;
    for (int i = 0; i < m; ++i) {
      double den;
      double r = model(q, x[i], &den) - y[i];
      if (std::abs(den) < 1e-12) return std::numeric_limits<double>::infinity();
      ss += r * r;
    }
    return ss;
  };

  // Gauss-Newton polish of the nonlinear least-squares objective
  double ssr = ssr_of(p);
  if (!std::isfinite(ssr)) {
    throw std::runtime_error(
        "zne: rational fit denominator root at a sample point; fit rejected");
  }
  for (int iter = 0; iter < 200; ++iter) {
    Eigen::MatrixXd jac(m, 6);
    Eigen::VectorXd res(m);
    for (int i = 0; i < m; ++i) {
      double xx = x[i];
      double num = xx * (p(1) + xx * (p(2) + xx * p(3)));
      double den = 1.0 + xx * (p(4) + xx * p(5));
      res(i) = p(0) + num / den - y[i];
      jac(i, 0) = 1.0;
      jac(i, 1) = xx / den;
      jac(i, 2) = xx * xx / den;
      jac(i, 3) = xx * xx * xx / den;
      jac(i, 4) = -num * xx / (den * den);
      jac(i, 5) = -num * xx * xx / (den * den);
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> jsvd(jac, Eigen::ComputeThinU |
                                                    Eigen::ComputeThinV);
    jsvd.setThreshold(1e-12);
    Eigen::VectorXd step = jsvd.solve(-res);
    if (!step.allFinite()) break;

    double shrink = 1.0;
    bool accepted = false;
    for (int half = 0; half < 40; ++half) {
      Eigen::VectorXd cand = p + shrink * step;
      double cand_ssr = ssr_of(cand);
      if (cand_ssr < ssr) {
        p = cand;
        accepted = cand_ssr < ssr - 1e-30 * (1.0 + ssr);
        ssr = cand_ssr;
        break;
      }
      shrink *= 0.5;
    }
    if (!accepted) break;
  }

  // reject a pole inside the sampled range [0, max eps]
  double a4 = p(4), a5 = p(5);
  auto reject = [&](double root_scaled) {
    std::ostringstream msg;
    msg << "zne: rational fit has a denominator root at eps = "
        << root_scaled * scale << " inside the sampled range; fit rejected";
    throw std::runtime_error(msg.str());
  };
  const double hi = 1.0 + 1e-9;
  if (std::abs(a5) > 1e-14) {
    double disc = a4 * a4 - 4.0 * a5;
    if (disc >= 0.0) {
      double sq = std::sqrt(disc);
      for (double r : {(-a4 + sq) / (2.0 * a5), (-a4 - sq) / (2.0 * a5)}) {
        if (r >= -1e-9 && r <= hi) reject(r);
      }
    }
  } else if (std::abs(a4) > 1e-14) {
    double r = -1.0 / a4;
    if (r >= -1e-9 && r <= hi) reject(r);
  }
  for (int i = 0; i < m; ++i) {
    double den = 1.0 + x[i] * (a4 + x[i] * a5);
    if (std::abs(den) < 1e-12) reject(x[i]);
  }

  FitResult fit;
  fit.kind = FitKind::pade33;
  fit.degree = 3;
  fit.coefficients = {p(0),          p(1) / scale,
                      p(2) / (scale * scale), p(3) / (scale * scale * scale),
                      p(4) / scale,  p(5) / (scale * scale)};
  fit.zero_noise_value = p(0);
  fit.fitted.resize(m);
  for (int i = 0; i < m; ++i) fit.fitted[i] = model(p, x[i], nullptr);
  fit.residual = rms(fit.fitted, y);
  return fit;
}

double evaluate_fit(const FitResult& fit, double eps) {
  if (fit.kind == FitKind::pade33) {
    if (fit.coefficients.size() != 6)
      fail("a pade33 fit carries exactly six coefficients");
    return pade_value(fit.coefficients, eps);
  }
  double out = 0.0;
  for (auto it = fit.coefficients.rbegin(); it != fit.coefficients.rend(); ++it)
    out = out * eps + *it;
  return out;
}

NoiseModel amplify(const NoiseModel& nm, double factor) {
  if (!(factor > 0.0)) fail("amplification factor must be positive");
  NoiseModel out = nm;
  auto scale_list = [&](std::vector<NoiseEntry>& entries) {
    for (NoiseEntry& e : entries) {
      if (!e.amplifiable) continue;
      e.prob *= factor;
      if (e.prob > 1.0)
        fail("amplified probability exceeds 1");
    }
  };
  scale_list(out.one_qubit);
  scale_list(out.two_qubit);
  scale_list(out.three_qubit);
  return out;
}

std::vector<double> default_eps_grid(double eps_base, int points) {
  if (!(eps_base > 0.0)) fail("the base error rate must be positive");
  if (points < 2) fail("the error-rate grid needs at least two points");
  std::vector<double> grid(points);
  for (int k = 0; k < points; ++k) {
    grid[k] = eps_base * (1.0 + static_cast<double>(k) / (points - 1));
  }
  return grid;
}

FitResult zne_pipeline(const std::function<double(double)>& evaluate,
                       std::span<const double> eps_grid, FitKind kind,
                       int degree) {
  if (eps_grid.empty()) fail("the error-rate grid must not be empty");
  std::vector<NoisePoint> points;
  points.reserve(eps_grid.size());
  for (double e : eps_grid) points.push_back({e, evaluate(e), 0});

  if (points.size() == 1) {
    FitResult fit;
    fit.kind = kind;
    fit.degree = 0;
    fit.zero_noise_value = points[0].value;
    fit.coefficients = {points[0].value};
    fit.fitted = {points[0].value};
    fit.residual = 0.0;
    return fit;
  }

  int nu = static_cast<int>(points.size()) - 1;
  NoiseScaleSeries series = NoiseScaleSeries::validated(
      std::move(points), kind == FitKind::exact_interp ? nu : 0);
  switch (kind) {
    case FitKind::linear: return fit_polynomial(series, 1);
    case FitKind::poly: return fit_polynomial(series, degree);
    case FitKind::exact_interp: return fit_exact(series);
    case FitKind::pade33: return fit_pade33(series);
  }
  fail("unknown fit kind");
}

std::string fit_to_csv(const NoiseScaleSeries& series, const FitResult& fit) {
  if (series.points.size() != fit.fitted.size())
    fail("the fit does not match the series");
  std::string out = "eps,value,fitted,residual\n";
  for (std::size_t i = 0; i < series.points.size(); ++i) {
    out += format_double(series.points[i].eps);
    out += ',';
    out += format_double(series.points[i].value);
    out += ',';
    out += format_double(fit.fitted[i]);
    out += ',';
    out += format_double(fit.fitted[i] - series.points[i].value);
    out += '\n';
  }
  return out;
}

std::string fit_to_json(const FitResult& fit) {
  nlohmann::ordered_json j;
  j["kind"] = fit_kind_name(fit.kind);
  j["degree"] = fit.degree;
  j["zero_noise_value"] = fit.zero_noise_value;
  j["coefficients"] = fit.coefficients;
  j["residual"] = fit.residual;
  return j.dump(2);
}

}  // namespace esdlab
