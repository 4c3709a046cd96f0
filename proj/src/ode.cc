#include "diffgram/ode.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "diffgram/errors.h"
#include "diffgram/system_model.h"

namespace diffgram {
namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// Difference between the 5th- and 4th-order weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

std::string format_time(double t) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", t);
  return buf;
}

bool all_finite(const Vector& v) { return v.allFinite(); }

}  // namespace

OdeRhs autonomous(const VectorField& field) {
  return [field](double, const Vector& y, Vector& dydt) { dydt = field(y); };
}

OdeRhs reversed(const OdeRhs& rhs) {
  return [rhs](double tau, const Vector& y, Vector& dydt) {
    rhs(-tau, y, dydt);
    dydt = -dydt;
  };
}

void Trajectory::append(double t, const Vector& y, const Vector& dydt) {
  times_.push_back(t);
  states_.push_back(y);
  slopes_.push_back(dydt);
}

Vector Trajectory::at(double t) const {
  if (times_.empty()) throw std::out_of_range("empty trajectory");
  const double slack = 1e-12 * std::max(1.0, std::abs(t));
  if (t < times_.front() - slack || t > times_.back() + slack) {
    throw std::out_of_range("time " + format_time(t) + " outside trajectory span");
  }
  if (times_.size() == 1) return states_.front();
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  std::size_t i1 = static_cast<std::size_t>(it - times_.begin());
  i1 = std::clamp<std::size_t>(i1, 1, times_.size() - 1);
  const std::size_t i0 = i1 - 1;
  const double h = times_[i1] - times_[i0];
  const double s = std::clamp((t - times_[i0]) / h, 0.0, 1.0);
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * states_[i0] + (s3 - 2 * s2 + s) * h * slopes_[i0] +
         (-2 * s3 + 3 * s2) * states_[i1] + (s3 - s2) * h * slopes_[i1];
}

Trajectory Trajectory::slice(int offset, int count) const {
  Trajectory out;
  for (std::size_t i = 0; i < times_.size(); ++i) {
    out.append(times_[i], states_[i].segment(offset, count), slopes_[i].segment(offset, count));
  }
  return out;
}

Trajectory Trajectory::time_reversed() const {
  Trajectory out;
  for (std::size_t i = times_.size(); i-- > 0;) out.append(-times_[i], states_[i], -slopes_[i]);
  return out;
}

OdeSolver::OdeSolver(OdeRhs rhs, double t0, const Vector& y0, IntegratorOptions options)
    : rhs_(std::move(rhs)), options_(std::move(options)), t_(t0), y_(y0) {
  if (!all_finite(y0)) throw IntegrationError(IntegrationError::Kind::kBlowUp, t0,
                                              "initial state is not finite");
  f_.resize(y_.size());
  rhs_(t_, y_, f_);
  stops_ = options_.tstops;
  std::sort(stops_.begin(), stops_.end());
}

double OdeSolver::error_norm(const Vector& y_new, const Vector& err) const {
  const Eigen::Index d = err.size();
  if (d == 0) return 0.0;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    const double sc = options_.atol + options_.rtol * std::max(std::abs(y_[i]), std::abs(y_new[i]));
    const double r = err[i] / sc;
    acc += r * r;
  }
  return std::sqrt(acc / static_cast<double>(d));
}

double OdeSolver::initial_step(double t_end) const {
  const double span = t_end - t_;
  if (options_.initial_step > 0.0) return std::min(options_.initial_step, span);
  const Eigen::Index d = y_.size();
  if (d == 0) return span;
  auto rms = [&](const Vector& v) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) {
      const double r = v[i] / (options_.atol + options_.rtol * std::abs(y_[i]));
      acc += r * r;
    }
    return std::sqrt(acc / static_cast<double>(d));
  };
  const double d0 = rms(y_);
  const double d1 = rms(f_);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, span);
  const Vector y1 = y_ + h0 * f_;
  Vector f1(d);
  rhs_(t_ + h0, y1, f1);
  const double d2 = rms(f1 - f_) / h0;
  const double dmax = std::max(d1, d2);
  const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.2);
  return std::min({100.0 * h0, h1, span, options_.max_step});
}

void OdeSolver::advance_to(double t_end, Trajectory* out) {
  if (out != nullptr && out->empty()) out->append(t_, y_, f_);
  if (t_end == t_) return;
  if (t_end < t_) throw std::invalid_argument("advance_to: target time precedes current time");
  if (h_ <= 0.0) h_ = initial_step(t_end);

  const Eigen::Index d = y_.size();
  Vector k2(d), k3(d), k4(d), k5(d), k6(d), k7(d), tmp(d), y_new(d), err(d);
  long attempts = 0;

  while (t_ < t_end) {
    double target = t_end;
    const double eps_t = 1e-14 * std::max(1.0, std::abs(t_));
    for (double s : stops_) {
      if (s > t_ + eps_t && s < target) {
        target = s;
        break;
      }
    }
    double h = std::min(h_, options_.max_step);
    bool landing = false;
    if (t_ + h >= target - 1e-14 * std::max(1.0, std::abs(target))) {
      h = target - t_;
      landing = true;
    }
    if (++attempts > options_.max_steps) {
      throw IntegrationError(IntegrationError::Kind::kMaxSteps, t_,
                             "maximum number of steps exceeded at t = " + format_time(t_));
    }

    const Vector& k1 = f_;
    tmp = y_ + h * (a21 * k1);
    rhs_(t_ + c2 * h, tmp, k2);
    tmp = y_ + h * (a31 * k1 + a32 * k2);
    rhs_(t_ + c3 * h, tmp, k3);
    tmp = y_ + h * (a41 * k1 + a42 * k2 + a43 * k3);
    rhs_(t_ + c4 * h, tmp, k4);
    tmp = y_ + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    rhs_(t_ + c5 * h, tmp, k5);
    tmp = y_ + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    rhs_(t_ + h, tmp, k6);
    y_new = y_ + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    rhs_(t_ + h, y_new, k7);
    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double en = error_norm(y_new, err);
    if (!std::isfinite(en) || !all_finite(k7)) en = std::numeric_limits<double>::infinity();

    if (en <= 1.0) {
      t_ = landing ? target : t_ + h;
      y_ = y_new;
      f_ = k7;
      ++steps_;
      if (out != nullptr) out->append(t_, y_, f_);
      if (y_.lpNorm<Eigen::Infinity>() > options_.blowup_norm) {
        throw IntegrationError(IntegrationError::Kind::kBlowUp, t_,
                               "solution escaped (norm > " + format_time(options_.blowup_norm) +
                                   ") at t = " + format_time(t_));
      }
      const double factor = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
      // A step shortened to hit a stop says little about the admissible size.
      h_ = landing ? std::max(h_, h * factor) : h * factor;
    } else {
      const double factor = std::isfinite(en) ? std::max(0.2, 0.9 * std::pow(en, -0.2)) : 0.2;
      h_ = h * factor;
      if (h_ < 1e-14 * std::max(1.0, std::abs(t_))) {
        if (!all_finite(y_new) || y_.lpNorm<Eigen::Infinity>() > 1e6) {
          throw IntegrationError(IntegrationError::Kind::kBlowUp, t_,
                                 "solution escaped near t = " + format_time(t_));
        }
        throw IntegrationError(IntegrationError::Kind::kStepUnderflow, t_,
                               "step size underflow at t = " + format_time(t_));
      }
    }
  }
}

Trajectory integrate_ivp(const OdeRhs& rhs, const Vector& x0, double t0, double tf,
                         const IntegratorOptions& options) {
  if (!(tf > t0)) throw std::invalid_argument("integrate_ivp: need tf > t0");
  OdeSolver solver(rhs, t0, x0, options);
  Trajectory out;
  solver.advance_to(tf, &out);
  return out;
}

Trajectory integrate_ivp(const VectorField& field, const Vector& x0, double t0, double tf,
                         const IntegratorOptions& options) {
  return integrate_ivp(autonomous(field), x0, t0, tf, options);
}

Trajectory integrate_backward(const OdeRhs& rhs, const Vector& x0, double T,
                              const IntegratorOptions& options) {
  if (!(T > 0)) throw std::invalid_argument("integrate_backward: need T > 0");
  IntegratorOptions reversed_options = options;
  reversed_options.tstops.clear();
  for (double t : options.tstops) reversed_options.tstops.push_back(-t);
  try {
    return integrate_ivp(reversed(rhs), x0, 0.0, T, reversed_options).time_reversed();
  } catch (const IntegrationError& e) {
    throw IntegrationError(e.kind(), -e.time(),
                           std::string("backward integration failed: ") + e.what() +
                               " (reversed time)");
  }
}

Trajectory integrate_backward(const VectorField& field, const Vector& x0, double T,
                              const IntegratorOptions& options) {
  return integrate_backward(autonomous(field), x0, T, options);
}

Matrix FlowJacobian::matrix(std::size_t i) const {
  return Eigen::Map<const Matrix>(augmented_.state(i).data() + n_, n_, n_);
}

Matrix FlowJacobian::at(double t) const {
  const Vector y = augmented_.at(t);
  return Eigen::Map<const Matrix>(y.data() + n_, n_, n_);
}

OdeRhs variational_matrix_rhs(const VectorField& field) {
  const int n = field.dim_in();
  return [field, n](double, const Vector& y, Vector& dydt) {
    Vector v;
    Matrix J;
    value_and_jacobian(field, y.head(n), v, J);
    dydt.head(n) = v;
    Eigen::Map<const Matrix> Phi(y.data() + n, n, n);
    Eigen::Map<Matrix>(dydt.data() + n, n, n) = J * Phi;
  };
}

FlowResult flow_with_jacobian(const VectorField& field, const Vector& x0, double t0, double tf,
                              const IntegratorOptions& options) {
  const int n = field.dim_in();
  if (field.dim_out() != n) throw ModelError("flow needs a field R^n -> R^n");
  Vector y0(n + n * n);
  y0.head(n) = x0;
  Eigen::Map<Matrix>(y0.data() + n, n, n) = Matrix::Identity(n, n);
  Trajectory aug = integrate_ivp(variational_matrix_rhs(field), y0, t0, tf, options);
  Trajectory states = aug.slice(0, n);
  return FlowResult{std::move(states), FlowJacobian(std::move(aug), n)};
}

}  // namespace diffgram
