#include "diffgram/energy.h"

#include <cmath>

#include <gtest/gtest.h>

#include "diffgram/gramian.h"
#include "diffgram/random.h"
#include "diffgram/registry.h"
#include "test_util.h"

namespace diffgram {
namespace {

using testing::vec;

TEST(EnergyTest, ScalarClosedForms) {
  const SystemModel sys = registry("linear_scalar").model;
  const double d = 3.0;
  // 1/2 int_0^inf e^{-2t} d^2 dt
  EXPECT_NEAR(diff_observability(sys, vec({0}), vec({d})).value, d * d / 4, 1e-8);
  EXPECT_NEAR(incr_observability(sys, vec({0}), vec({d})).value, d * d / 4, 1e-8);
  // 1/2 int_{-inf}^0 4 e^{2t} d^2 dt with k = 2x
  EXPECT_NEAR(diff_controllability_fb(sys, vec({0}), vec({d})).value, d * d, 1e-8);
  EXPECT_NEAR(incr_controllability_fb(sys, vec({0.5}), vec({0.5 + d})).value, d * d, 1e-8);
}

TEST(EnergyTest, ZeroTangentAndCoincidentPoints) {
  const SystemModel sys = registry("paper_sec5").model;
  const Vector x = vec({0.1, -0.05});
  EXPECT_EQ(diff_observability(sys, x, Vector::Zero(2)).value, 0.0);
  EXPECT_EQ(diff_controllability_fb(sys, x, Vector::Zero(2)).value, 0.0);
  EXPECT_EQ(incr_observability(sys, x, x).value, 0.0);
  EXPECT_EQ(incr_controllability_fb(sys, x, x).value, 0.0);
}

TEST(EnergyTest, MetadataAndErrorEstimates) {
  const SystemModel sys = registry("paper_sec5").model;
  const EnergyValue e = diff_observability(sys, Vector::Zero(2), vec({1, 0}));
  EXPECT_EQ(e.definition, "E_dO");
  EXPECT_GE(e.horizon, 20.0);
  EXPECT_GE(e.error_estimate, 0.0);
  EXPECT_NEAR(e.value, 0.5, 1e-8);
  EXPECT_NEAR(diff_controllability_fb(sys, Vector::Zero(2), vec({1, 0})).value, 0.5, 1e-8);
}

TEST(EnergyTest, MatchesGramianQuadraticForm) {
  const SystemModel sys = registry("paper_sec5").model;
  const Vector x = vec({0.05, -0.1}), d = vec({0.6, 0.8});
  const Matrix Q = empirical_obs_gramian(sys, x).matrix;
  EXPECT_NEAR(diff_observability(sys, x, d).value, 0.5 * d.dot(Q * d), 1e-6);
  const Matrix R = empirical_ctrl_gramian(sys, x).matrix;
  EXPECT_NEAR(diff_controllability_fb(sys, x, d).value, 0.5 * d.dot(R * d), 1e-6);
}

TEST(EnergyTest, DifferentialEnergyNeedsFeedback) {
  const SystemModel open = registry("paper_sec5").model.without_feedback();
  EXPECT_THROW(diff_controllability_fb(open, Vector::Zero(2), vec({1, 0})), ModelError);
}

TEST(EnergyTest, PathIntegralOfConstantEnergy) {
  const SystemModel sys = registry("linear_scalar").model;
  DifferentialEnergy E = [&](const Vector& x, const Vector& dx) {
    return diff_observability(sys, x, dx);
  };
  const EnergyValue v = path_energy_integral(E, LinePath::between(vec({-1}), vec({1})));
  EXPECT_NEAR(v.value, 1.0, 1e-8);  // (2)^2 / 4
}

TEST(EnergyTest, QuadraticLimitOfExactQuadratic) {
  IncrementalEnergy E = [](const Vector& a, const Vector& b) {
    const double d = (b - a).squaredNorm();
    return EnergyValue{1.5 * d + 0.25 * d * (b - a)[0], 0.0, 0.0, "model"};
  };
  const QuadraticLimit q = quadratic_limit(E, vec({0, 0}), vec({1, 0}));
  EXPECT_NEAR(q.value, 1.5, 1e-12);
  EXPECT_EQ(q.table.s.size(), 4u);
  EXPECT_EQ(q.table.extrapolants.size(), 2u);
}

TEST(EnergyTest, QuadraticLimitRejectsNonQuadraticGrowth) {
  IncrementalEnergy E = [](const Vector& a, const Vector& b) {
    return EnergyValue{std::abs((b - a)[0]), 0.0, 0.0, "linear"};
  };
  EXPECT_THROW(quadratic_limit(E, vec({0}), vec({1})), ConvergenceError);
}

// Any perturbation of the optimal variational input costs at least E_dC.
TEST(EnergyProperty, PerturbedInputsCostAtLeastTheOptimum) {
  const SystemModel sys = registry("paper_sec5").model;
  const Vector x0 = vec({0.05, 0.02}), dx0 = vec({0.6, -0.8});
  const double optimum = diff_controllability_fb(sys, x0, dx0).value;
  SplitMix64 rng(9);
  for (int i = 0; i < 5; ++i) {
    const double a = rng.uniform(-1, 1), t0 = rng.uniform(-6, -2), len = rng.uniform(0.5, 2);
    TimeSignal w = [=](double t) {
      Vector v = Vector::Zero(1);
      if (t > t0 && t < t0 + len) v[0] = a * std::pow(std::sin(M_PI * (t - t0) / len), 2);
      return v;
    };
    EXPECT_GE(perturbed_input_energy(sys, x0, dx0, w).value, optimum - 1e-8);
  }
  TimeSignal none = [](double) { return Vector::Zero(1); };
  EXPECT_NEAR(perturbed_input_energy(sys, x0, dx0, none).value, optimum, 1e-9);
}

}  // namespace
}  // namespace diffgram
