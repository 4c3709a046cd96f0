#include "diffgram/rank.h"

#include <sstream>

#include <gtest/gtest.h>

#include "diffgram/registry.h"
#include "test_util.h"

namespace diffgram {
namespace {

using testing::vec;

TEST(RankTest, NumericRankTolerance) {
  Matrix M(2, 2);
  M << 1, 1, 1, 1 + 1e-12;
  EXPECT_EQ(make_rank_matrix(M).rank, 1);
  M(1, 1) = 1 + 1e-6;
  EXPECT_EQ(make_rank_matrix(M).rank, 2);
  EXPECT_EQ(make_rank_matrix(Matrix::Zero(2, 3)).rank, 0);
}

TEST(RankTest, ExampleMatrices) {
  const SystemModel sys = registry("paper_sec5").model;
  EXPECT_EQ(default_depth(sys), 3);
  const RankMatrix c = ctrl_bracket_matrix(sys, Vector::Zero(2), 2);
  EXPECT_EQ(c.matrix.rows(), 2);
  EXPECT_EQ(c.matrix.cols(), 3);
  EXPECT_EQ(c.rank, 2);
  EXPECT_LT((c.matrix.col(1) - vec({1.5, 0.5})).norm(), 1e-15);

  // h = x1 and dL_f h = [-1/2 - 2x1 - x1^2 - x2, -1 - x1].
  const RankMatrix o = obs_codistribution(sys, vec({-1, 0.4}), 1);
  EXPECT_EQ(o.rank, 1);
  EXPECT_LT((o.matrix.row(1) - vec({0.1, 0}).transpose()).norm(), 1e-14);
  EXPECT_EQ(obs_codistribution(sys, vec({-0.9, 0.4}), 1).rank, 2);
  EXPECT_EQ(strong_access_matrix(sys, Vector::Zero(2), 1).rank, 2);
}

TEST(RankTest, LinearKalmanRank) {
  const SystemModel sys = registry("linear_2x2").model;
  EXPECT_EQ(obs_codistribution(sys, vec({3, -1})).rank, 2);
  EXPECT_EQ(strong_access_matrix(sys, vec({3, -1})).rank, 2);
  // An unobservable output.
  Matrix A(2, 2), B(2, 1), C(1, 2);
  A << -1, 0, 0, -2;
  B << 1, 1;
  C << 1, 0;
  EXPECT_EQ(obs_codistribution(linear_system(A, B, C), vec({1, 1})).rank, 1);
}

TEST(RankTest, SweepCsv) {
  const SystemModel sys = registry("paper_sec5").model;
  const RankSweep s = rank_sweep([&](const Vector& x) { return obs_codistribution(sys, x, 1); },
                                 Box{vec({-1, -1}), vec({1, 1})}, {3, 3}, 2);
  ASSERT_EQ(s.rank.size(), 9u);
  EXPECT_EQ(s.rank[0], 1);  // x1 = -1
  EXPECT_EQ(s.rank[4], 2);
  std::ostringstream csv;
  s.write_csv(csv);
  EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')),
            "x1,x2,rank,sigma_min,sigma_max,sigma_ratio,status");
}

// Deeper matrices contain the shallower ones, so rank never drops.
TEST(RankProperty, RankIsMonotoneInDepth) {
  const SystemModel sys = registry("paper_sec5").model;
  for (const Vector& x : {vec({-1, 0.2}), vec({0.3, 0.3}), vec({-2, 1})}) {
    int prev = 0;
    for (int depth = 1; depth <= 4; ++depth) {
      const int r = obs_codistribution(sys, x, depth).rank;
      EXPECT_GE(r, prev);
      EXPECT_LE(r, 2);
      prev = r;
    }
  }
}

}  // namespace
}  // namespace diffgram
