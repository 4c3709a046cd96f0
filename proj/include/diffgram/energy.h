#pragma once

#include <functional>
#include <string>
#include <vector>

#include "diffgram/quadrature.h"
#include "diffgram/system_model.h"
#include "diffgram/systems.h"

namespace diffgram {

struct EnergyValue {
  double value = 0.0;
  double error_estimate = 0.0;
  /// Final truncation horizon of the time integral (0 for path/limit values).
  double horizon = 0.0;
  /// Which quantity produced the value, e.g. "E_dO".
  std::string definition;
};

/// gamma(s) = start + s (end - start), s in [0, 1].
struct LinePath {
  Vector start;
  Vector end;

  static LinePath between(const Vector& x0, const Vector& x0_prime) { return {x0, x0_prime}; }
  /// gamma_bar(s) = x0 + s dx0.
  static LinePath along(const Vector& x0, const Vector& dx0) { return {x0, x0 + dx0}; }

  Vector at(double s) const { return start + s * (end - start); }
  Vector tangent() const { return end - start; }
};

/// E(point, tangent), e.g. a differential energy function.
using DifferentialEnergy = std::function<EnergyValue(const Vector& x, const Vector& dx)>;
/// E(x0, x0'), e.g. an incremental energy function.
using IncrementalEnergy = std::function<EnergyValue(const Vector& x0, const Vector& x0_prime)>;

/// E_dO(x0, dx0) = 1/2 int_0^inf |dy|^2 dt with (u, du) = (0, 0).
EnergyValue diff_observability(const SystemModel& sys, const Vector& x0, const Vector& dx0,
                               const ImproperOptions& options = {});

/// E_iO(x0, x0') = 1/2 int_0^inf |y' - y|^2 dt with zero inputs.
EnergyValue incr_observability(const SystemModel& sys, const Vector& x0, const Vector& x0_prime,
                               const ImproperOptions& options = {});

/// E_dC along u = k: 1/2 int_{-inf}^0 |dk/dx dx(t)|^2 dt over the
/// closed-loop prolonged flow ending at (x0, dx0).
EnergyValue diff_controllability_fb(const SystemModel& sys, const Vector& x0, const Vector& dx0,
                                    const ImproperOptions& options = {});

/// E_iC along u = k: 1/2 int_{-inf}^0 |k(x'(t)) - k(x(t))|^2 dt over two
/// closed-loop copies ending at x0 and x0'.
EnergyValue incr_controllability_fb(const SystemModel& sys, const Vector& x0,
                                    const Vector& x0_prime, const ImproperOptions& options = {});

/**
 * 1/2 int_{-inf}^0 |du(t)|^2 dt for the variational input
 * du = dk/dx dx + w(t) along the closed-loop trajectory ending at x0, where
 * dx solves the prolonged dynamics backward from dx(0) = dx0. `w` should
 * vanish outside a bounded subset of (-inf, 0].
 */
EnergyValue perturbed_input_energy(const SystemModel& sys, const Vector& x0, const Vector& dx0,
                                   const TimeSignal& w, const ImproperOptions& options = {});

/// int_0^1 E(gamma(s), dgamma/ds) ds by Gauss-Legendre; the error estimate
/// adds the order-doubling difference and the weighted inner estimates.
EnergyValue path_energy_integral(const DifferentialEnergy& E, const LinePath& path,
                                 int gl_order = 6);

struct LimitTable {
  std::vector<double> s;
  /// E(x0, x0 + s dx0) / s^2
  std::vector<double> ratio;
  std::vector<double> ratio_error;
  /// Quadratic extrapolants to s = 0 through consecutive ladder triples.
  std::vector<double> extrapolants;
};

struct QuadraticLimit {
  double value = 0.0;
  double error_estimate = 0.0;
  LimitTable table;
};

std::vector<double> default_ladder();

/**
 * lim_{s -> 0+} E(x0, x0 + s dx0) / s^2 by Richardson extrapolation with the
 * model a + b s + c s^2. Throws ConvergenceError when the last two
 * extrapolants differ by more than tol times the limit (plus the propagated
 * evaluation error).
 */
QuadraticLimit quadratic_limit(const IncrementalEnergy& E, const Vector& x0, const Vector& dx0,
                               const std::vector<double>& ladder = default_ladder(),
                               double tol = 1e-3);

}  // namespace diffgram
