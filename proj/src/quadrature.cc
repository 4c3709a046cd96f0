#include "diffgram/quadrature.h"

#include <cmath>
#include <numbers>

#include "diffgram/errors.h"

namespace diffgram {

GaussLegendreRule gauss_legendre(int order) {
  if (order < 1) throw std::invalid_argument("Gauss-Legendre order must be positive");
  GaussLegendreRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (order == 1) p0 = 1.0;
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged root for the weight.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= order; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = order == 1 ? 1.0 : order * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  return rule;
}

QuadratureResult quadrature_finite(const std::function<double(double)>& f, double a, double b,
                                   int order) {
  auto apply = [&](int n) {
    const GaussLegendreRule rule = gauss_legendre(n);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return half * sum;
  };
  QuadratureResult out;
  out.value = apply(order);
  out.abs_error_estimate = std::abs(out.value - apply(2 * order));
  return out;
}

ImproperOptions ImproperOptions::with_tolerance(double tol) {
  ImproperOptions o;
  o.tol = tol;
  o.integrator.rtol = tol / 10.0;
  o.integrator.atol = tol / 1e4;
  return o;
}

namespace {

constexpr int kTailSamples = 10;

// Least-squares fit of log(s) = a - mu t; returns false without two positive
// samples.
bool fit_log_linear(const std::vector<double>& t, const std::vector<double>& s, double* a,
                    double* mu) {
  double n = 0, st = 0, sy = 0, stt = 0, sty = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(s[i] > 0.0)) continue;
    const double y = std::log(s[i]);
    n += 1;
    st += t[i];
    sy += y;
    stt += t[i] * t[i];
    sty += t[i] * y;
  }
  if (n < 2) return false;
  const double denom = n * stt - st * st;
  if (denom <= 0) return false;
  const double slope = (n * sty - st * sy) / denom;
  *a = (sy - slope * st) / n;
  *mu = -slope;
  return true;
}

}  // namespace

TimeIntegralResult improper_time_integral(const OdeRhs& rhs, const Vector& y0,
                                          int integrand_dim, const TimeIntegrand& integrand,
                                          TimeDirection direction,
                                          const ImproperOptions& options) {
  const int d = static_cast<int>(y0.size());
  const int k = integrand_dim;
  const double sign = direction == TimeDirection::kForward ? 1.0 : -1.0;

  // Integrate in tau = sign * t so the horizon always grows forward.
  OdeRhs augmented = [rhs, integrand, d, k, sign](double tau, const Vector& z, Vector& dz) {
    const double t = sign * tau;
    const Vector y = z.head(d);
    Vector dy(d);
    if (d > 0) {
      rhs(t, y, dy);
      dz.head(d) = sign * dy;
    }
    Vector q(k);
    integrand(t, y, q);
    dz.segment(d, k) = q;
  };

  Vector z0 = Vector::Zero(d + k);
  z0.head(d) = y0;
  OdeSolver solver(augmented, 0.0, z0, options.integrator);
  Trajectory traj;

  const double dt_sample = options.initial_horizon / 20.0;
  double horizon = options.initial_horizon;
  double increment = 0.0;
  bool converged = false;
  int doublings = 0;
  for (;; ++doublings) {
    solver.advance_to(horizon, &traj);
    const Vector value = solver.state().segment(d, k);
    const Vector half = traj.at(0.5 * horizon).segment(d, k);
    increment = (value - half).norm();
    if (increment <= options.tol * value.norm() || increment <= 1e-300) {
      converged = true;
      break;
    }
    if (doublings == options.max_doublings) break;
    horizon *= 2.0;
  }
  const Vector value = solver.state().segment(d, k);
  if (!converged) {
    throw DivergenceError("improper integral did not settle: last increment " +
                              std::to_string(increment) + " against value " +
                              std::to_string(value.norm()),
                          horizon);
  }

  std::vector<double> ts, ss;
  for (int j = kTailSamples - 1; j >= 0; --j) {
    const double tau = horizon - j * dt_sample;
    const Vector z = traj.at(tau);
    Vector q(k);
    integrand(sign * tau, z.head(d), q);
    ts.push_back(tau);
    ss.push_back(q.norm());
  }
  double a = 0.0, mu = 0.0, tail = increment;
  const bool fitted = fit_log_linear(ts, ss, &a, &mu);
  if (fitted && mu > 0.0) tail = std::exp(a - mu * horizon) / mu;
  bool all_zero = true;
  for (double s : ss) all_zero = all_zero && s == 0.0;
  if (all_zero) tail = 0.0;

  TimeIntegralResult out;
  out.value = value;
  out.truncation_horizon = horizon;
  out.doublings = doublings;
  out.tail_rate = fitted ? mu : 0.0;
  out.abs_error_estimate = tail + 10.0 * options.integrator.rtol * value.norm();
  Trajectory states = traj.slice(0, d);
  out.trajectory = direction == TimeDirection::kForward ? std::move(states)
                                                         : states.time_reversed();
  return out;
}

QuadratureResult improper_time_integral(const std::function<double(double)>& integrand,
                                        TimeDirection direction, const ImproperOptions& options) {
  const TimeIntegralResult r = improper_time_integral(
      [](double, const Vector&, Vector&) {}, Vector(), 1,
      [&integrand](double t, const Vector&, Vector& out) { out[0] = integrand(t); }, direction,
      options);
  return QuadratureResult{r.value[0], r.abs_error_estimate, r.truncation_horizon};
}

}  // namespace diffgram
