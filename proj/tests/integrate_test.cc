#include <cmath>

#include <gtest/gtest.h>

#include "diffgram/errors.h"
#include "diffgram/ode.h"
#include "diffgram/quadrature.h"
#include "diffgram/registry.h"
#include "test_util.h"

namespace diffgram {
namespace {

using testing::vec;

OdeRhs harmonic() {
  return [](double, const Vector& y, Vector& d) {
    d[0] = y[1];
    d[1] = -y[0];
  };
}

TEST(OdeTest, HarmonicOscillatorAgainstClosedForm) {
  const Trajectory traj = integrate_ivp(harmonic(), vec({1, 0}), 0.0, 10.0);
  EXPECT_EQ(traj.end_time(), 10.0);
  EXPECT_LT((traj.final_state() - vec({std::cos(10.0), -std::sin(10.0)})).norm(), 1e-8);
  // Dense output between accepted steps.
  for (double t : {0.33, 2.5, 7.77}) {
    EXPECT_LT((traj.at(t) - vec({std::cos(t), -std::sin(t)})).norm(), 1e-6);
  }
  EXPECT_THROW(traj.at(10.5), std::out_of_range);
}

TEST(OdeTest, LandsOnStopTimes) {
  IntegratorOptions opts;
  opts.tstops = {0.1, 1.0 / 3.0, 2.0};
  const Trajectory traj = integrate_ivp(harmonic(), vec({1, 0}), 0.0, 3.0, opts);
  for (double s : opts.tstops) {
    EXPECT_NE(std::find(traj.times().begin(), traj.times().end(), s), traj.times().end());
  }
}

TEST(OdeTest, BackwardIntegration) {
  OdeRhs grow = [](double, const Vector& y, Vector& d) { d[0] = y[0]; };
  const Trajectory traj = integrate_backward(grow, vec({1}), 5.0);
  EXPECT_EQ(traj.start_time(), -5.0);
  EXPECT_EQ(traj.end_time(), 0.0);
  EXPECT_NEAR(traj.at(-5.0)[0], std::exp(-5.0), 1e-10);
  EXPECT_NEAR(traj.at(-1.0)[0], std::exp(-1.0), 1e-8);
}

TEST(OdeTest, FiniteEscapeIsReported) {
  OdeRhs riccati = [](double, const Vector& y, Vector& d) { d[0] = y[0] * y[0]; };
  try {
    integrate_ivp(riccati, vec({1}), 0.0, 2.0);
    FAIL() << "expected blow-up";
  } catch (const IntegrationError& e) {
    EXPECT_EQ(e.kind(), IntegrationError::Kind::kBlowUp);
    EXPECT_NEAR(e.time(), 1.0, 1e-3);
  }
}

TEST(OdeTest, FlowJacobianOfLinearSystem) {
  Matrix A(2, 2);
  A << 0, 1, -2, -3;
  const FlowResult r = flow_with_jacobian(linear_field(A), vec({1, 0}), 0.0, 1.5);
  // exp(A t) for eigenvalues -1, -2.
  auto expm = [](double t) {
    Matrix E(2, 2);
    const double a = std::exp(-t), b = std::exp(-2 * t);
    E << 2 * a - b, a - b, -2 * a + 2 * b, -a + 2 * b;
    return E;
  };
  EXPECT_LT((r.jacobian.at(1.5) - expm(1.5)).norm(), 1e-8);
  EXPECT_LT((r.jacobian.at(0.7) - expm(0.7)).norm(), 1e-6);
}

// The flow Jacobian of the nonlinear example matches finite differences of
// the flow itself.
TEST(OdeProperty, FlowJacobianMatchesPerturbedFlows) {
  const SystemModel sys = registry("paper_sec5").model;
  const Vector x0 = vec({0.2, -0.1});
  const FlowResult r = flow_with_jacobian(sys.f(), x0, 0.0, 3.0);
  IntegratorOptions tight;
  tight.rtol = 1e-12;
  tight.atol = 1e-14;
  const Matrix fd = testing::fd_jacobian(
      [&](const Vector& y) { return integrate_ivp(sys.f(), y, 0.0, 3.0, tight).final_state(); }, x0,
      1e-3);
  EXPECT_LT((r.jacobian.matrix(r.jacobian.size() - 1) - fd).norm(), 1e-6);
}

TEST(QuadratureTest, GaussLegendreExactness) {
  for (int order : {1, 3, 6, 10}) {
    const GaussLegendreRule rule = gauss_legendre(order);
    double wsum = 0;
    for (double w : rule.weights) wsum += w;
    EXPECT_NEAR(wsum, 2.0, 1e-14);
    // Exact for degree 2n - 1.
    const int deg = 2 * order - 1;
    const auto r = quadrature_finite([deg](double t) { return std::pow(t, deg) + 1; }, 0, 2, order);
    EXPECT_NEAR(r.value, std::pow(2.0, deg + 1) / (deg + 1) + 2, 1e-11 * std::pow(2.0, deg));
  }
  const auto r = quadrature_finite([](double t) { return std::exp(t); }, 0, 1, 6);
  EXPECT_NEAR(r.value, std::exp(1.0) - 1, 1e-13);
  EXPECT_LT(r.abs_error_estimate, 1e-12);
}

TEST(QuadratureTest, ImproperExponential) {
  const auto fwd = improper_time_integral([](double t) { return std::exp(-2 * t); },
                                          TimeDirection::kForward);
  EXPECT_NEAR(fwd.value, 0.5, 1e-9);
  EXPECT_LE(std::abs(fwd.value - 0.5), fwd.abs_error_estimate + 1e-12);
  const auto bwd = improper_time_integral([](double t) { return 3 * std::exp(t); },
                                          TimeDirection::kBackward);
  EXPECT_NEAR(bwd.value, 3.0, 3e-9);
}

TEST(QuadratureTest, SlowDecayNeedsDoubling) {
  const auto r = improper_time_integral([](double t) { return std::exp(-0.2 * t); },
                                        TimeDirection::kForward);
  EXPECT_GT(r.truncation_horizon, 20.0);
  EXPECT_NEAR(r.value, 5.0, 1e-6);
}

TEST(QuadratureTest, NonDecayingIntegrandDiverges) {
  EXPECT_THROW(improper_time_integral([](double) { return 1.0; }, TimeDirection::kForward),
               DivergenceError);
}

TEST(QuadratureTest, StateIntegral) {
  OdeRhs decay = [](double, const Vector& y, Vector& d) { d[0] = -y[0]; };
  const auto r = improper_time_integral(
      decay, vec({2}), 1, [](double, const Vector& y, Vector& out) { out[0] = y[0] * y[0]; },
      TimeDirection::kForward);
  EXPECT_NEAR(r.value[0], 2.0, 1e-8);
}

}  // namespace
}  // namespace diffgram
