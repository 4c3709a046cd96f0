#include "diffgram/systems.h"

#include <gtest/gtest.h>

#include "diffgram/calculus.h"
#include "diffgram/random.h"
#include "diffgram/registry.h"
#include "test_util.h"

namespace diffgram {
namespace {

using testing::vec;

TEST(SystemsTest, ProlongedLayoutAndObservations) {
  const SystemModel sys = registry("paper_sec5").model;
  const AugmentedField p = prolong(sys, zero_input(1), zero_variation(1));
  EXPECT_EQ(p.dim(), 4);
  EXPECT_EQ(p.slice("dx").offset, 2);
  const Vector y = p.stack({vec({0.1, 0.2}), vec({1, -1})});
  EXPECT_LT((p.observe("dy", 0.0, y) - vec({1})).norm(), 1e-15);
  // The variational part is the Jacobian applied to dx.
  const Vector d = p(0.0, y);
  EXPECT_LT((d.tail(2) - jacobian(sys.f(), vec({0.1, 0.2})) * vec({1, -1})).norm(), 1e-14);
  EXPECT_THROW(p.slice("dp"), ModelError);
  EXPECT_THROW(p.stack({vec({1, 2})}), ModelError);
}

TEST(SystemsTest, ClosedLoopProlongedUsesFeedbackDerivative) {
  const SystemModel sys = registry("paper_sec5").model;
  const AugmentedField cl = closed_loop_prolonged(sys);
  const Vector x = vec({0.3, -0.4}), dx = vec({0.5, 2});
  const Vector d = cl(0.0, cl.stack({x, dx}));
  const Matrix Jcl = jacobian(sys.closed_loop_field(), x);
  EXPECT_LT((d.tail(2) - Jcl * dx).norm(), 1e-13);
  EXPECT_NEAR(cl.observe("dk", 0.0, cl.stack({x, dx}))[0],
              (jacobian(sys.k(), x) * dx)[0], 1e-14);
}

TEST(SystemsTest, TwoCopyIsTwoIndependentFlows) {
  const SystemModel sys = registry("paper_sec5").model;
  const AugmentedField tc = two_copy(sys, zero_input(1), zero_input(1));
  const Vector a = vec({0.1, 0.1}), b = vec({-0.2, 0.05});
  const Trajectory both = integrate_ivp(tc.rhs(), tc.stack({a, b}), 0.0, 3.0);
  const Trajectory one = integrate_ivp(sys.f(), b, 0.0, 3.0);
  EXPECT_LT((tc.part("x_prime", both.final_state()) - one.final_state()).norm(), 1e-8);
}

TEST(SystemsTest, DualSystemsNeedFeedbackOnlyWhenClosedLoop) {
  const SystemModel open = registry("paper_sec5").model.without_feedback();
  EXPECT_THROW(dual_closed_loop(open), ModelError);
  EXPECT_NO_THROW(dual_open(open));
}

// <dp, dx> is conserved between the variational system and its adjoint.
TEST(SystemsProperty, AdjointPairingIsConstant) {
  for (const char* name : {"paper_sec5", "linear_2x2"}) {
    const SystemModel sys = registry(name).model;
    SplitMix64 rng(5);
    for (int i = 0; i < 3; ++i) {
      const Vector lo = Vector::Constant(2, -0.3), hi = Vector::Constant(2, 0.3);
      const Vector x0 = rng.uniform_vector(lo, hi);
      const Vector dx0 = rng.uniform_vector(-hi * 3, hi * 3);
      const Vector dp0 = rng.uniform_vector(-hi * 3, hi * 3);
      const PairingResult r = adjoint_pairing(sys, x0, dx0, dp0, 10.0, 51);
      EXPECT_EQ(r.times.size(), 51u);
      EXPECT_LT(r.max_deviation, 1e-6) << name;
    }
  }
}

}  // namespace
}  // namespace diffgram
