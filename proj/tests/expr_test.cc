#include "diffgram/expr.h"

#include <gtest/gtest.h>

#include "diffgram/registry.h"
#include "diffgram/system_spec.h"
#include "diffgram/random.h"

namespace diffgram {
namespace {

using expr::parse_expression;

double eval_at(const std::string& text, std::vector<double> x) {
  return parse_expression(text).evaluate(std::span<const double>(x));
}

TEST(ExprTest, FeedbackExpressionByHand) {
  EXPECT_DOUBLE_EQ(eval_at("x1 + x1^2/2 + x2", {1, 2}), 3.5);
  EXPECT_DOUBLE_EQ(eval_at("0", {}), 0.0);
  EXPECT_DOUBLE_EQ(eval_at("x1^3/3", {3}), 9.0);
}

TEST(ExprTest, Precedence) {
  EXPECT_DOUBLE_EQ(eval_at("-x1^2", {3}), -9.0);
  EXPECT_DOUBLE_EQ(eval_at("2 + 3 * 4", {}), 14.0);
  EXPECT_DOUBLE_EQ(eval_at("8 / 4 / 2", {}), 1.0);
  EXPECT_DOUBLE_EQ(eval_at("8 - 4 - 2", {}), 2.0);
  EXPECT_DOUBLE_EQ(eval_at("(1 + x1) * x2", {1, 3}), 6.0);
  EXPECT_DOUBLE_EQ(eval_at("2^3^2", {}), 64.0);  // left-associative like every binary operator
  EXPECT_DOUBLE_EQ(eval_at("1.5e1 - .5", {}), 14.5);
}

TEST(ExprTest, SyntaxErrorOffset) {
  try {
    parse_expression("x1 +* x2");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 4u);
  }
  EXPECT_THROW(parse_expression("x1^1.5"), ParseError);
  EXPECT_THROW(parse_expression("x1 $ 2"), ParseError);
  EXPECT_THROW(parse_expression(""), ParseError);
  EXPECT_THROW(parse_expression("(x1"), ParseError);
  EXPECT_THROW(parse_expression("y1"), ParseError);
}

TEST(ExprTest, DivisionByZeroIsAnError) {
  EXPECT_THROW(eval_at("1 / (x1 - 1)", {1}), EvalError);
}

TEST(ExprTest, DualDerivatives) {
  std::vector<DualD> x = {DualD::variable(2.0, 0, 1)};
  const DualD y = parse_expression("x1").evaluate(std::span<const DualD>(x));
  EXPECT_DOUBLE_EQ(y.value(), 2.0);
  EXPECT_DOUBLE_EQ(y.tangent(0), 1.0);

  std::vector<DualD> xy = {DualD(1.0, 1), DualD::variable(1.0, 0, 1)};
  const DualD p = parse_expression("x1*x2").evaluate(std::span<const DualD>(xy));
  EXPECT_DOUBLE_EQ(p.value(), 1.0);
  EXPECT_DOUBLE_EQ(p.tangent(0), 1.0);
}

TEST(ExprTest, RoundTripThroughText) {
  for (const char* text : {"x1 + x1^2/2 + x2", "-x1/2 - x1^2 - x1^3/3 - x1*x2 - x2",
                           "-(x1 - 3)^2 / (1 + x2^2)", "0"}) {
    const auto e = parse_expression(text);
    EXPECT_EQ(parse_expression(e.to_string()), e) << text;
  }
}

// Dual tangents agree with finite differences on random polynomial points.
TEST(ExprProperty, DualMatchesFiniteDifference) {
  const auto e = parse_expression("x1^3*x2 - 2*x1/(1 + x2^2) + x2^4/7");
  SplitMix64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2);
    std::vector<DualD> x = {DualD::variable(a, 0, 2), DualD::variable(b, 1, 2)};
    const DualD d = e.evaluate(std::span<const DualD>(x));
    const double h = 1e-6;
    const double fd0 = (eval_at(e.to_string(), {a + h, b}) - eval_at(e.to_string(), {a - h, b})) / (2 * h);
    const double fd1 = (eval_at(e.to_string(), {a, b + h}) - eval_at(e.to_string(), {a, b - h})) / (2 * h);
    EXPECT_NEAR(d.tangent(0), fd0, 1e-6 * (1 + std::abs(fd0)));
    EXPECT_NEAR(d.tangent(1), fd1, 1e-6 * (1 + std::abs(fd1)));
  }
}

TEST(SystemSpecTest, BundledExample) {
  const SystemSpec spec = load_system_spec(DIFFGRAM_DATA_DIR "/example.json");
  EXPECT_EQ(spec.n, 2);
  EXPECT_EQ(spec.m, 1);
  EXPECT_EQ(spec.p, 1);
  ASSERT_TRUE(spec.k.has_value());
  EXPECT_EQ(spec.fields.count("P"), 1u);

  // Same functions as the registry entry.
  const SystemModel a = system_from_spec(spec).model;
  const SystemModel b = registry("paper_sec5").model;
  for (const Vector& x : {Vector(Vector::Zero(2)), Vector(Vector::Constant(2, 0.37))}) {
    EXPECT_LT((a.drift(x) - b.drift(x)).norm(), 1e-15);
    EXPECT_LT((a.input_matrix(x) - b.input_matrix(x)).norm(), 1e-15);
    EXPECT_LT((a.feedback(x) - b.feedback(x)).norm(), 1e-15);
  }
}

TEST(SystemSpecTest, Rejections) {
  EXPECT_THROW(parse_system_spec(R"({"n":2,"m":1,"p":1,"f":["x1","x2","0"],"g":[["1"],["1"]],"h":["x1"]})"),
               SpecError);
  EXPECT_THROW(parse_system_spec(R"({"n":2,"m":1,"p":1,"f":["x1","x3"],"g":[["1"],["1"]],"h":["x1"]})"),
               SpecError);
  EXPECT_THROW(parse_system_spec(R"({"n":2,"m":1,"f":["x1","x2"],"g":[["1"],["1"]],"h":["x1"]})"),
               SpecError);
  EXPECT_THROW(parse_system_spec(R"({"n":1,"m":1,"p":1,"f":["x1 +"],"g":[["1"]],"h":["x1"]})"),
               ParseError);
  const SystemSpec no_k =
      parse_system_spec(R"({"n":1,"m":1,"p":1,"f":["-x1"],"g":[["1"]],"h":["x1"]})");
  EXPECT_FALSE(no_k.k.has_value());
}

}  // namespace
}  // namespace diffgram
