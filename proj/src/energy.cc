#include "diffgram/energy.h"

#include <cmath>

#include "diffgram/errors.h"

namespace diffgram {
namespace {

void check_dims(const SystemModel& sys, const Vector& a, const Vector& b) {
  if (a.size() != sys.n() || b.size() != sys.n()) {
    throw ModelError("energy arguments must have the state dimension");
  }
}

EnergyValue half_integral(const AugmentedField& field, const Vector& y0,
                          const std::string& observation, TimeDirection direction,
                          const ImproperOptions& options, const std::string& definition) {
  const TimeIntegralResult r = improper_time_integral(
      field.rhs(), y0, 1,
      [&field, &observation](double t, const Vector& y, Vector& out) {
        out[0] = field.observe(observation, t, y).squaredNorm();
      },
      direction, options);
  return EnergyValue{0.5 * r.value[0], 0.5 * r.abs_error_estimate, r.truncation_horizon,
                     definition};
}

}  // namespace

EnergyValue diff_observability(const SystemModel& sys, const Vector& x0, const Vector& dx0,
                               const ImproperOptions& options) {
  check_dims(sys, x0, dx0);
  const AugmentedField field = prolong(sys, zero_input(sys.m()), zero_variation(sys.m()));
  return half_integral(field, field.stack({x0, dx0}), "dy", TimeDirection::kForward, options,
                       "E_dO");
}

EnergyValue incr_observability(const SystemModel& sys, const Vector& x0, const Vector& x0_prime,
                               const ImproperOptions& options) {
  check_dims(sys, x0, x0_prime);
  const AugmentedField field = two_copy(sys, zero_input(sys.m()), zero_input(sys.m()));
  return half_integral(field, field.stack({x0, x0_prime}), "dy", TimeDirection::kForward,
                       options, "E_iO");
}

EnergyValue diff_controllability_fb(const SystemModel& sys, const Vector& x0, const Vector& dx0,
                                    const ImproperOptions& options) {
  check_dims(sys, x0, dx0);
  const AugmentedField field = closed_loop_prolonged(sys);
  return half_integral(field, field.stack({x0, dx0}), "dk", TimeDirection::kBackward, options,
                       "E_dC");
}

EnergyValue incr_controllability_fb(const SystemModel& sys, const Vector& x0,
                                    const Vector& x0_prime, const ImproperOptions& options) {
  check_dims(sys, x0, x0_prime);
  const AugmentedField field = two_copy(sys, feedback_input(sys.k()), feedback_input(sys.k()));
  return half_integral(field, field.stack({x0, x0_prime}), "du", TimeDirection::kBackward,
                       options, "E_iC");
}

EnergyValue perturbed_input_energy(const SystemModel& sys, const Vector& x0, const Vector& dx0,
                                   const TimeSignal& w, const ImproperOptions& options) {
  check_dims(sys, x0, dx0);
  const VariationalInput du = feedback_variation(sys.k(), w);
  AugmentedField field = prolong(sys, feedback_input(sys.k()), du);
  const int n = sys.n();
  field.observe_as("du", [du, n](double t, const Vector& y) {
    return du(t, y.head(n), y.tail(n));
  });
  return half_integral(field, field.stack({x0, dx0}), "du", TimeDirection::kBackward, options,
                       "1/2 |du|^2");
}

EnergyValue path_energy_integral(const DifferentialEnergy& E, const LinePath& path,
                                 int gl_order) {
  const Vector tangent = path.tangent();
  auto apply = [&](int order, double* inner_error) {
    const GaussLegendreRule rule = gauss_legendre(order);
    double sum = 0.0;
    *inner_error = 0.0;
    for (int i = 0; i < order; ++i) {
      const double s = 0.5 * (rule.nodes[i] + 1.0);
      const EnergyValue e = E(path.at(s), tangent);
      sum += 0.5 * rule.weights[i] * e.value;
      *inner_error += 0.5 * rule.weights[i] * e.error_estimate;
    }
    return sum;
  };
  double err_n = 0.0, err_2n = 0.0;
  const double q_n = apply(gl_order, &err_n);
  const double q_2n = apply(2 * gl_order, &err_2n);
  return EnergyValue{q_n, std::abs(q_n - q_2n) + std::max(err_n, err_2n), 0.0, "path integral"};
}

std::vector<double> default_ladder() { return {0.1, 0.05, 0.025, 0.0125}; }

QuadraticLimit quadratic_limit(const IncrementalEnergy& E, const Vector& x0, const Vector& dx0,
                               const std::vector<double>& ladder, double tol) {
  if (ladder.size() < 4) throw std::invalid_argument("the s-ladder needs at least four entries");
  QuadraticLimit out;
  LimitTable& table = out.table;
  for (double s : ladder) {
    if (!(s > 0)) throw std::invalid_argument("ladder entries must be positive");
    const EnergyValue e = E(x0, x0 + s * dx0);
    table.s.push_back(s);
    table.ratio.push_back(e.value / (s * s));
    table.ratio_error.push_back(e.error_estimate / (s * s));
  }

  // Lagrange extrapolation to s = 0 of the quadratic through each triple.
  double propagated = 0.0;
  for (std::size_t i = 0; i + 2 < ladder.size(); ++i) {
    double value = 0.0;
    propagated = 0.0;
    for (std::size_t a = i; a < i + 3; ++a) {
      double w = 1.0;
      for (std::size_t b = i; b < i + 3; ++b) {
        if (b != a) w *= table.s[b] / (table.s[b] - table.s[a]);
      }
      value += w * table.ratio[a];
      propagated += std::abs(w) * table.ratio_error[a];
    }
    table.extrapolants.push_back(value);
  }
  const std::size_t last = table.extrapolants.size() - 1;
  out.value = table.extrapolants[last];
  const double diff = std::abs(table.extrapolants[last] - table.extrapolants[last - 1]);
  out.error_estimate = diff + propagated;
  if (diff > tol * std::abs(out.value) + propagated) {
    throw ConvergenceError("quadratic limit did not settle: extrapolants " +
                           std::to_string(table.extrapolants[last - 1]) + " and " +
                           std::to_string(table.extrapolants[last]));
  }
  return out;
}

}  // namespace diffgram
