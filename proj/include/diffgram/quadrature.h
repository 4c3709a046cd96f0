#pragma once

#include <functional>
#include <vector>

#include "diffgram/ode.h"

namespace diffgram {

struct QuadratureResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  /// Final horizon of an improper time integral (0 for finite intervals).
  double truncation_horizon = 0.0;
};

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

GaussLegendreRule gauss_legendre(int order);

/// Gauss-Legendre of the given order on [a, b]; the error estimate is the
/// difference to the rule of twice the order.
QuadratureResult quadrature_finite(const std::function<double(double)>& f, double a, double b,
                                   int order);

enum class TimeDirection { kForward, kBackward };

struct ImproperOptions {
  /// Relative size of the last horizon increment accepted as converged.
  double tol = 1e-8;
  double initial_horizon = 20.0;
  int max_doublings = 6;
  IntegratorOptions integrator;

  /// Options whose integrator tolerances are tied to `tol`
  /// (rtol = tol / 10, atol = tol / 1e4), which reproduces the defaults.
  static ImproperOptions with_tolerance(double tol);
};

struct TimeIntegralResult {
  Vector value;
  double abs_error_estimate = 0.0;
  double truncation_horizon = 0.0;
  int doublings = 0;
  /// Fitted exponential rate of the integrand norm over the final samples
  /// (negative or zero when no decay was seen).
  double tail_rate = 0.0;
  /// State trajectory over the final horizon, in the original time variable.
  Trajectory trajectory;
};

/// integrand(t, y, out) writes the k non-negative integrand components.
using TimeIntegrand = std::function<void(double t, const Vector& y, Vector& out)>;

/**
 * Integral of `integrand` along the solution of dy/dt = rhs(t, y), y(0) = y0,
 * over [0, inf) (forward) or (-inf, 0] (backward). The horizon starts at
 * `initial_horizon` and doubles until the increment over the last half is at
 * most tol times the value; the error estimate adds an exponential tail fitted
 * to the last ten integrand samples. Throws DivergenceError when the
 * increments never settle.
 */
TimeIntegralResult improper_time_integral(const OdeRhs& rhs, const Vector& y0,
                                          int integrand_dim, const TimeIntegrand& integrand,
                                          TimeDirection direction,
                                          const ImproperOptions& options = {});

/// Scalar integrand depending on time only.
QuadratureResult improper_time_integral(const std::function<double(double)>& integrand,
                                        TimeDirection direction,
                                        const ImproperOptions& options = {});

}  // namespace diffgram
