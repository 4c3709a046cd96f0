#include "diffgram/systems.h"

#include <algorithm>

#include "diffgram/errors.h"

namespace diffgram {

InputSignal zero_input(int m) {
  return [m](double, const Vector&) { return Vector::Zero(m).eval(); };
}

InputSignal feedback_input(const VectorField& k) {
  return [k](double, const Vector& x) { return k(x); };
}

InputSignal open_loop_input(TimeSignal u) {
  return [u = std::move(u)](double t, const Vector&) { return u(t); };
}

VariationalInput zero_variation(int m) {
  return [m](double, const Vector&, const Vector&) { return Vector::Zero(m).eval(); };
}

VariationalInput feedback_variation(const VectorField& k, TimeSignal w) {
  return [k, w = std::move(w)](double t, const Vector& x, const Vector& dx) {
    Vector kv;
    Matrix dk;
    value_and_jacobian(k, x, kv, dk);
    Vector du = dk * dx;
    if (w) du += w(t);
    return du;
  };
}

VariationalInput open_loop_variation(TimeSignal du) {
  return [du = std::move(du)](double t, const Vector&, const Vector&) { return du(t); };
}

AugmentedField::AugmentedField(int dim, OdeRhs rhs, std::vector<Slice> layout)
    : dim_(dim), rhs_(std::move(rhs)), layout_(std::move(layout)) {
  std::vector<Slice> sorted = layout_;
  std::sort(sorted.begin(), sorted.end(),
            [](const Slice& a, const Slice& b) { return a.offset < b.offset; });
  int next = 0;
  for (const Slice& s : sorted) {
    if (s.offset != next || s.size < 0) throw ModelError("layout slices must partition the state");
    next += s.size;
  }
  if (next != dim_) throw ModelError("layout slices must partition the state");
}

Vector AugmentedField::operator()(double t, const Vector& y) const {
  Vector dy(dim_);
  rhs_(t, y, dy);
  return dy;
}

const Slice& AugmentedField::slice(const std::string& name) const {
  for (const Slice& s : layout_) {
    if (s.name == name) return s;
  }
  throw ModelError("no slice named '" + name + "'");
}

Vector AugmentedField::part(const std::string& name, const Vector& y) const {
  const Slice& s = slice(name);
  return y.segment(s.offset, s.size);
}

Vector AugmentedField::stack(const std::vector<Vector>& parts) const {
  if (parts.size() != layout_.size()) throw ModelError("one vector per slice expected");
  Vector y(dim_);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].size() != layout_[i].size) {
      throw ModelError("slice '" + layout_[i].name + "' has size " +
                       std::to_string(layout_[i].size));
    }
    y.segment(layout_[i].offset, layout_[i].size) = parts[i];
  }
  return y;
}

AugmentedField& AugmentedField::observe_as(const std::string& name, Observation map) {
  observations_[name] = std::move(map);
  return *this;
}

bool AugmentedField::has_observation(const std::string& name) const {
  return observations_.count(name) > 0;
}

Vector AugmentedField::observe(const std::string& name, double t, const Vector& y) const {
  auto it = observations_.find(name);
  if (it == observations_.end()) throw ModelError("no observation named '" + name + "'");
  return it->second(t, y);
}

std::vector<std::string> AugmentedField::observation_names() const {
  std::vector<std::string> names;
  for (const auto& [name, map] : observations_) names.push_back(name);
  return names;
}

namespace {

std::vector<Slice> pair_layout(const std::string& a, const std::string& b, int n) {
  return {Slice{a, 0, n}, Slice{b, n, n}};
}

}  // namespace

AugmentedField prolong(const SystemModel& sys, InputSignal u, VariationalInput du) {
  const int n = sys.n();
  OdeRhs rhs = [sys, u, du, n](double t, const Vector& y, Vector& dy) {
    const Vector x = y.head(n);
    const Vector dx = y.tail(n);
    const Linearization lin = sys.linearize(x, SystemModel::kDrift | SystemModel::kInput);
    const Vector uv = u(t, x);
    dy.head(n) = lin.f + lin.g * uv;
    dy.tail(n) = lin.frozen_jacobian(uv) * dx + lin.g * du(t, x, dx);
  };
  AugmentedField field(2 * n, std::move(rhs), pair_layout("x", "dx", n));
  field.observe_as("y", [sys, n](double, const Vector& y) { return sys.output(y.head(n)); });
  field.observe_as("dy", [sys, n](double, const Vector& y) {
    const Linearization lin = sys.linearize(y.head(n), SystemModel::kOutput);
    return Vector(lin.dh * y.tail(n));
  });
  return field;
}

AugmentedField closed_loop_prolonged(const SystemModel& sys) {
  sys.k();  // throws without feedback
  const int n = sys.n();
  OdeRhs rhs = [sys, n](double, const Vector& y, Vector& dy) {
    const Linearization lin = sys.linearize(
        y.head(n), SystemModel::kDrift | SystemModel::kInput | SystemModel::kFeedback);
    dy.head(n) = lin.closed_loop_drift();
    dy.tail(n) = lin.closed_loop_jacobian() * y.tail(n);
  };
  AugmentedField field(2 * n, std::move(rhs), pair_layout("x", "dx", n));
  field.observe_as("y", [sys, n](double, const Vector& y) { return sys.output(y.head(n)); });
  field.observe_as("dy", [sys, n](double, const Vector& y) {
    const Linearization lin = sys.linearize(y.head(n), SystemModel::kOutput);
    return Vector(lin.dh * y.tail(n));
  });
  field.observe_as("u", [sys, n](double, const Vector& y) { return sys.feedback(y.head(n)); });
  field.observe_as("dk", [sys, n](double, const Vector& y) {
    Vector kv;
    Matrix dk;
    value_and_jacobian(sys.k(), y.head(n), kv, dk);
    return Vector(dk * y.tail(n));
  });
  return field;
}

AugmentedField two_copy(const SystemModel& sys, InputSignal u, InputSignal u_prime) {
  const int n = sys.n();
  OdeRhs rhs = [sys, u, u_prime, n](double t, const Vector& y, Vector& dy) {
    const Vector x = y.head(n);
    const Vector xp = y.tail(n);
    dy.head(n) = sys.drift(x) + sys.input_matrix(x) * u(t, x);
    dy.tail(n) = sys.drift(xp) + sys.input_matrix(xp) * u_prime(t, xp);
  };
  AugmentedField field(2 * n, std::move(rhs), pair_layout("x", "x_prime", n));
  field.observe_as("y", [sys, n](double, const Vector& y) { return sys.output(y.head(n)); });
  field.observe_as("y_prime",
                   [sys, n](double, const Vector& y) { return sys.output(y.tail(n)); });
  field.observe_as("dy", [sys, n](double, const Vector& y) {
    return Vector(sys.output(y.tail(n)) - sys.output(y.head(n)));
  });
  field.observe_as("du", [u, u_prime, n](double t, const Vector& y) {
    return Vector(u_prime(t, y.tail(n)) - u(t, y.head(n)));
  });
  return field;
}

namespace {

Observation dual_output(const SystemModel& sys) {
  const int n = sys.n();
  return [sys, n](double, const Vector& y) {
    return Vector(sys.input_matrix(y.head(n)).transpose() * y.tail(n));
  };
}

}  // namespace

AugmentedField dual_closed_loop(const SystemModel& sys) {
  sys.k();
  const int n = sys.n();
  OdeRhs rhs = [sys, n](double, const Vector& y, Vector& dy) {
    const Linearization lin = sys.linearize(
        y.head(n), SystemModel::kDrift | SystemModel::kInput | SystemModel::kFeedback);
    dy.head(n) = -lin.closed_loop_drift();
    dy.tail(n) = lin.frozen_closed_loop_jacobian().transpose() * y.tail(n);
  };
  AugmentedField field(2 * n, std::move(rhs), pair_layout("x", "dp", n));
  field.observe_as("dz", dual_output(sys));
  return field;
}

AugmentedField dual_open(const SystemModel& sys) {
  const int n = sys.n();
  OdeRhs rhs = [sys, n](double, const Vector& y, Vector& dy) {
    const Linearization lin = sys.linearize(y.head(n), SystemModel::kDrift);
    dy.head(n) = -lin.f;
    dy.tail(n) = lin.df.transpose() * y.tail(n);
  };
  AugmentedField field(2 * n, std::move(rhs), pair_layout("x", "dp", n));
  field.observe_as("dz", dual_output(sys));
  return field;
}

IntegratorOptions pairing_options() {
  IntegratorOptions o;
  o.rtol = 1e-12;
  o.atol = 1e-20;
  return o;
}

PairingResult adjoint_pairing(const SystemModel& sys, const Vector& x0, const Vector& dx0,
                              const Vector& dp0, double T, int samples,
                              const IntegratorOptions& options) {
  const int n = sys.n();
  if (x0.size() != n || dx0.size() != n || dp0.size() != n) {
    throw ModelError("pairing inputs must have the state dimension");
  }
  if (samples < 2) throw ModelError("pairing needs at least two samples");
  PairingResult out;
  for (int i = 0; i < samples; ++i) out.times.push_back(T * i / (samples - 1));

  IntegratorOptions fwd = options;
  fwd.tstops = out.times;
  const AugmentedField forward = prolong(sys, zero_input(sys.m()), zero_variation(sys.m()));
  const Trajectory primal = integrate_ivp(forward.rhs(), forward.stack({x0, dx0}), 0.0, T, fwd);

  IntegratorOptions bwd = options;
  for (double t : out.times) bwd.tstops.push_back(T - t);
  const AugmentedField dual = dual_open(sys);
  const Trajectory adjoint =
      integrate_ivp(dual.rhs(), dual.stack({primal.final_state().head(n), dp0}), 0.0, T, bwd);

  for (double t : out.times) {
    const Vector dx = primal.at(t).tail(n);
    const Vector dp = adjoint.at(T - t).tail(n);
    out.pairing.push_back(dp.dot(dx));
  }
  for (double v : out.pairing) {
    out.max_deviation = std::max(out.max_deviation, std::abs(v - out.pairing.front()));
  }
  return out;
}

}  // namespace diffgram
