#include "diffgram/verify.h"

#include <cmath>

#include <gtest/gtest.h>
#include <json.hpp>

#include "diffgram/registry.h"
#include "test_util.h"

namespace diffgram {
namespace {

using testing::vec;

TEST(VerdictTest, Inequality) {
  EXPECT_EQ(inequality_verdict(1e-3, 1e-9, 1e-6), Verdict::kPass);
  EXPECT_EQ(inequality_verdict(-1e-3, 1e-9, 1e-6), Verdict::kFail);
  EXPECT_EQ(inequality_verdict(-1e-9, 1e-8, 1e-6), Verdict::kPass);
  EXPECT_EQ(inequality_verdict(1e-6, 1e-4, 1e-6), Verdict::kInconclusive);
}

TEST(VerdictTest, EqualityAndCombine) {
  EXPECT_EQ(equality_verdict(5e-5, 0.0, 1e-4), Verdict::kPass);
  EXPECT_EQ(equality_verdict(5e-3, 1e-6, 1e-4), Verdict::kFail);
  EXPECT_EQ(combine({Verdict::kPass, Verdict::kPass}), Verdict::kPass);
  EXPECT_EQ(combine({Verdict::kPass, Verdict::kInconclusive}), Verdict::kInconclusive);
  EXPECT_EQ(combine({Verdict::kInconclusive, Verdict::kFail}), Verdict::kFail);
  EXPECT_EQ(verdict_name(Verdict::kInconclusive), "inconclusive");
}

TEST(DecayFitTest, RecoversRate) {
  std::vector<double> t, v;
  for (int i = 0; i <= 40; ++i) {
    t.push_back(0.25 * i);
    v.push_back(3.0 * std::exp(-0.7 * t.back()));
  }
  const DecayEstimate f = fit_decay(t, v, TimeDirection::kForward);
  EXPECT_NEAR(f.lambda, 0.7, 1e-10);
  EXPECT_NEAR(f.c, 3.0, 1e-9);
  EXPECT_FALSE(f.hypothesis_violated);

  std::vector<double> flat(t.size(), 2.0);
  EXPECT_TRUE(fit_decay(t, flat, TimeDirection::kForward).hypothesis_violated);
  EXPECT_THROW(fit_decay({0, 1}, {1, 1}, TimeDirection::kForward), std::invalid_argument);
}

TEST(VerifyTest, LinearTheoremsHoldWithEquality) {
  const SystemModel sys = registry("linear_scalar").model;
  const std::vector<PointPair> pairs = {{vec({0.1}), vec({-0.2})}, {vec({1}), vec({1.5})}};
  for (const Report& r : {check_thm1(sys, pairs), check_thm3(sys, pairs), check_thm4(sys, pairs),
                          check_thm2(sys, pairs)}) {
    EXPECT_EQ(r.verdict, Verdict::kPass) << r.theorem;
    for (const auto& s : r.samples) EXPECT_LE(std::abs(s.margin), 1e-8) << r.theorem;
  }
}

TEST(VerifyTest, ReportJsonShape) {
  const SystemModel sys = registry("linear_scalar").model;
  const Report r = check_thm3(sys, {{vec({0.1}), vec({-0.2})}});
  const auto j = nlohmann::json::parse(r.to_json());
  EXPECT_EQ(j["theorem"], "thm3");
  EXPECT_EQ(j["verdict"], "pass");
  ASSERT_EQ(j["samples"].size(), 1u);
  EXPECT_TRUE(j["samples"][0].contains("margin"));
  EXPECT_TRUE(j["samples"][0].contains("budget"));
}

TEST(VerifyTest, RegionChecksOnExample) {
  const RegisteredSystem rs = registry("paper_sec5");
  RegionCheck region;
  region.region = Box{vec({-0.5, -0.5}), vec({0.5, 0.5})};
  region.grid = {5, 5};
  region.samples = 3;
  const Report r = check_cor7(rs.model, rs.certificate("P"), region);
  EXPECT_EQ(r.verdict, Verdict::kPass);
  ASSERT_EQ(r.implications.size(), 3u);
  for (const auto& imp : r.implications) EXPECT_NE(imp.status, "violated");
}

TEST(VerifyTest, IndefiniteCandidateViolatesAnImplication) {
  const SystemModel sys = registry("linear_2x2").model;
  RegionCheck region;
  region.region = Box{vec({-0.3, -0.3}), vec({0.3, 0.3})};
  region.grid = {3, 3};
  region.samples = 2;
  const Report r = check_thm5(sys, MatrixField::constant(2, -Matrix::Identity(2, 2)), region);
  EXPECT_EQ(r.verdict, Verdict::kFail);
  bool violated = false;
  for (const auto& imp : r.implications) violated |= imp.status == "violated";
  EXPECT_TRUE(violated);
}

TEST(VerifyProperty, SamplingIsDeterministic) {
  const Box box{vec({-0.1, -0.1}), vec({0.1, 0.1})};
  const auto a = random_pairs(box, 5, 42), b = random_pairs(box, 5, 42);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].first, b[i].first);
    EXPECT_TRUE(box.contains(a[i].second));
  }
  for (const auto& [x, d] : random_directions(box, 5, 7)) {
    EXPECT_NEAR(d.norm(), 1.0, 1e-15);
    EXPECT_TRUE(box.contains(x));
  }
  EXPECT_NE(random_pairs(box, 1, 1)[0].first, random_pairs(box, 1, 2)[0].first);
}

}  // namespace
}  // namespace diffgram
