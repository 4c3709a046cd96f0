#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "diffgram/ode.h"
#include "diffgram/system_model.h"

namespace diffgram {

/// Input u(t) evaluated against the current system state x, so feedback
/// u = k(x) is co-integrated with the flow it drives.
using InputSignal = std::function<Vector(double t, const Vector& x)>;
/// Variational input delta u(t), evaluated against (x, delta x).
using VariationalInput = std::function<Vector(double t, const Vector& x, const Vector& dx)>;
/// Open-loop signal of time only.
using TimeSignal = std::function<Vector(double t)>;

InputSignal zero_input(int m);
InputSignal feedback_input(const VectorField& k);
InputSignal open_loop_input(TimeSignal u);

VariationalInput zero_variation(int m);
/// delta u = (dk/dx)(x) delta x, plus `w(t)` when given.
VariationalInput feedback_variation(const VectorField& k, TimeSignal w = {});
VariationalInput open_loop_variation(TimeSignal du);

struct Slice {
  std::string name;
  int offset = 0;
  int size = 0;
};

/// Observation map of an augmented state, e.g. the variational output.
using Observation = std::function<Vector(double t, const Vector& y)>;

/**
 * A (possibly time-varying) vector field on a stacked state, with named
 * slices and named observation maps.
 */
class AugmentedField {
 public:
  AugmentedField(int dim, OdeRhs rhs, std::vector<Slice> layout);

  int dim() const { return dim_; }
  const OdeRhs& rhs() const { return rhs_; }
  Vector operator()(double t, const Vector& y) const;

  const std::vector<Slice>& layout() const { return layout_; }
  const Slice& slice(const std::string& name) const;
  Vector part(const std::string& name, const Vector& y) const;
  /// Stacks one vector per slice, in layout order.
  Vector stack(const std::vector<Vector>& parts) const;

  AugmentedField& observe_as(const std::string& name, Observation map);
  bool has_observation(const std::string& name) const;
  Vector observe(const std::string& name, double t, const Vector& y) const;
  std::vector<std::string> observation_names() const;

 private:
  int dim_;
  OdeRhs rhs_;
  std::vector<Slice> layout_;
  std::map<std::string, Observation> observations_;
};

/// Prolonged system (x, dx):  dx/dt = f + g u,
/// d(dx)/dt = (df/dx + sum_j dg_j/dx u_j) dx + g du.
/// Observations: "y" = h(x), "dy" = dh/dx dx.
AugmentedField prolong(const SystemModel& sys, InputSignal u, VariationalInput du);

/// Closed-loop prolongation with the full Jacobian of f + g k.
/// Observations: "y", "dy", "u" = k(x), "dk" = dk/dx dx.
AugmentedField closed_loop_prolonged(const SystemModel& sys);

/// Two copies (x, x_prime) driven by u and u_prime.
/// Observations: "y", "y_prime", "dy" = h(x') - h(x), "du" = u' - u.
AugmentedField two_copy(const SystemModel& sys, InputSignal u, InputSignal u_prime);

/// dx/dt = -(f + g k), d(dp)/dt = (frozen-u Jacobian)^T dp.
/// Observation "dz" = g^T dp.
AugmentedField dual_closed_loop(const SystemModel& sys);

/// dx/dt = -f, d(dp)/dt = (df/dx)^T dp. Observation "dz" = g^T dp.
AugmentedField dual_open(const SystemModel& sys);

struct PairingResult {
  std::vector<double> times;
  std::vector<double> pairing;
  /// max_i |pairing_i - pairing_0|
  double max_deviation = 0.0;
};

/// Pure relative error control: the pairing mixes growing and decaying modes.
IntegratorOptions pairing_options();

/**
 * <dp, dx> along a forward zero-input trajectory. dx(t) solves the
 * variational equation from (x0, dx0) on [0, T]; dp is propagated by the
 * open dual system started at (x(T), dp0), which retraces the same path,
 * and re-indexed so that dp(t) pairs with dx(t). Sampled at `samples`
 * equally spaced times.
 */
PairingResult adjoint_pairing(const SystemModel& sys, const Vector& x0, const Vector& dx0,
                              const Vector& dp0, double T, int samples = 101,
                              const IntegratorOptions& options = pairing_options());

}  // namespace diffgram
