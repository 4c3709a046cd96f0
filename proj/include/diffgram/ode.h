#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <vector>

#include "diffgram/vector_field.h"

namespace diffgram {

/// Right-hand side dy/dt = rhs(t, y), written into `dydt` (pre-sized).
using OdeRhs = std::function<void(double t, const Vector& y, Vector& dydt)>;

/// Wraps an autonomous field as an OdeRhs.
OdeRhs autonomous(const VectorField& field);

struct IntegratorOptions {
  double rtol = 1e-9;
  double atol = 1e-12;
  /// 0 selects the starting step automatically.
  double initial_step = 0.0;
  double max_step = std::numeric_limits<double>::infinity();
  long max_steps = 1000000;
  /// States whose max-norm exceeds this are treated as a finite escape.
  double blowup_norm = 1e12;
  /// Times the integrator must land on exactly (recorded as grid points).
  std::vector<double> tstops;
};

/**
 * Accepted-step grid of an ODE solution with cubic Hermite dense output
 * built from the stored states and slopes.
 */
class Trajectory {
 public:
  Trajectory() = default;

  int dim() const { return states_.empty() ? 0 : static_cast<int>(states_.front().size()); }
  std::size_t size() const { return times_.size(); }
  bool empty() const { return times_.empty(); }

  const std::vector<double>& times() const { return times_; }
  const std::vector<Vector>& states() const { return states_; }
  const std::vector<Vector>& slopes() const { return slopes_; }
  double time(std::size_t i) const { return times_[i]; }
  const Vector& state(std::size_t i) const { return states_[i]; }
  double start_time() const { return times_.front(); }
  double end_time() const { return times_.back(); }
  const Vector& final_state() const { return states_.back(); }

  /// Dense output; throws std::out_of_range outside [start_time, end_time].
  Vector at(double t) const;

  /// Rows [offset, offset + count) of every sample.
  Trajectory slice(int offset, int count) const;

  /// The same curve parametrized by -t (times and slopes are mirrored).
  Trajectory time_reversed() const;

  void append(double t, const Vector& y, const Vector& dydt);

 private:
  std::vector<double> times_;
  std::vector<Vector> states_;
  std::vector<Vector> slopes_;
};

/**
 * Dormand-Prince 5(4) integrator with FSAL, Hairer's RMS error norm and
 * step rejection on non-finite stages. The solver keeps its state between
 * `advance_to` calls, so a horizon can be extended without restarting.
 */
class OdeSolver {
 public:
  OdeSolver(OdeRhs rhs, double t0, const Vector& y0, IntegratorOptions options = {});

  double time() const { return t_; }
  const Vector& state() const { return y_; }
  long steps_taken() const { return steps_; }

  /// Integrates to `t_end` (> time()), appending every accepted step to
  /// `out` when given. Throws IntegrationError on blow-up, step underflow
  /// or exhaustion of max_steps.
  void advance_to(double t_end, Trajectory* out = nullptr);

 private:
  double initial_step(double t_end) const;
  double error_norm(const Vector& y_new, const Vector& err) const;

  OdeRhs rhs_;
  IntegratorOptions options_;
  double t_;
  Vector y_;
  Vector f_;
  double h_ = 0.0;
  long steps_ = 0;
  std::vector<double> stops_;  // sorted
};

Trajectory integrate_ivp(const OdeRhs& rhs, const Vector& x0, double t0, double tf,
                         const IntegratorOptions& options = {});
Trajectory integrate_ivp(const VectorField& field, const Vector& x0, double t0, double tf,
                         const IntegratorOptions& options = {});

/// Solution on [-T, 0] of dx/dt = rhs(t, x), x(0) = x0, computed by
/// integrating the reversed system forward in tau = -t. Returned times are
/// the original (negative) ones, increasing. `options.tstops` are given in t.
Trajectory integrate_backward(const OdeRhs& rhs, const Vector& x0, double T,
                              const IntegratorOptions& options = {});
Trajectory integrate_backward(const VectorField& field, const Vector& x0, double T,
                              const IntegratorOptions& options = {});

/// The time-reversed right-hand side  (tau, y) -> -rhs(-tau, y).
OdeRhs reversed(const OdeRhs& rhs);

/// Samples of the flow Jacobian Phi(t) = d phi(t, x0) / d x0.
class FlowJacobian {
 public:
  FlowJacobian(Trajectory augmented, int n) : augmented_(std::move(augmented)), n_(n) {}

  const std::vector<double>& times() const { return augmented_.times(); }
  std::size_t size() const { return augmented_.size(); }
  Matrix matrix(std::size_t i) const;
  Matrix at(double t) const;

 private:
  Trajectory augmented_;
  int n_;
};

struct FlowResult {
  Trajectory trajectory;
  FlowJacobian jacobian;
};

/// Co-integrates x and Phi with dPhi/dt = J(x) Phi, Phi(t0) = I.
FlowResult flow_with_jacobian(const VectorField& field, const Vector& x0, double t0, double tf,
                              const IntegratorOptions& options = {});

/// Right-hand side of the (n + n^2)-dimensional state-plus-Jacobian system;
/// Phi is stored column-major after x.
OdeRhs variational_matrix_rhs(const VectorField& field);

}  // namespace diffgram
