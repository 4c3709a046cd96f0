#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "diffgram/dual.h"
#include "diffgram/errors.h"
#include "diffgram/jet.h"

namespace diffgram::expr {

enum class Op { kConstant, kVariable, kNeg, kAdd, kSub, kMul, kDiv, kPow };

/// Immutable expression tree node. Variables are positional: x1 has
/// `index == 1`. For kPow, `index` holds the non-negative integer exponent.
struct Node {
  Op op = Op::kConstant;
  double constant = 0.0;
  int index = 0;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

/**
 * A parsed polynomial/rational expression over the positional variables
 * x1..xn. Cheap to copy; the tree is shared and never mutated, so a single
 * expression may be evaluated concurrently.
 */
class Expression {
 public:
  /// The constant zero.
  Expression();
  explicit Expression(std::shared_ptr<const Node> root);

  static Expression constant(double value);

  const Node& root() const { return *root_; }

  /// Largest variable index referenced (0 if the expression is constant).
  int max_variable_index() const;

  /// Fully parenthesized text that re-parses to the same tree.
  std::string to_string() const;

  /// Structural equality.
  friend bool operator==(const Expression& a, const Expression& b);

  /// Evaluates with `vars[i]` bound to x(i+1). Works for double, Dual and Jet.
  template <typename T>
  T evaluate(std::span<const T> vars) const {
    return evaluate_node(*root_, vars);
  }

 private:
  template <typename T>
  static T evaluate_node(const Node& node, std::span<const T> vars);

  std::shared_ptr<const Node> root_;
};

Expression parse_expression(std::string_view text);

template <typename T>
T integer_power(const T& base, int exponent) {
  T result(1.0);
  T factor = base;
  while (exponent > 0) {
    if (exponent & 1) result = result * factor;
    exponent >>= 1;
    if (exponent > 0) factor = factor * factor;
  }
  return result;
}

template <typename T>
T Expression::evaluate_node(const Node& node, std::span<const T> vars) {
  switch (node.op) {
    case Op::kConstant:
      return T(node.constant);
    case Op::kVariable:
      if (node.index < 1 || static_cast<std::size_t>(node.index) > vars.size()) {
        throw EvalError("unbound variable x" + std::to_string(node.index));
      }
      return vars[node.index - 1];
    case Op::kNeg:
      return -evaluate_node(*node.lhs, vars);
    case Op::kAdd:
      return evaluate_node(*node.lhs, vars) + evaluate_node(*node.rhs, vars);
    case Op::kSub:
      return evaluate_node(*node.lhs, vars) - evaluate_node(*node.rhs, vars);
    case Op::kMul:
      return evaluate_node(*node.lhs, vars) * evaluate_node(*node.rhs, vars);
    case Op::kDiv: {
      T denominator = evaluate_node(*node.rhs, vars);
      if (primal(denominator) == 0.0) throw EvalError("division by zero");
      return evaluate_node(*node.lhs, vars) / denominator;
    }
    case Op::kPow:
      return integer_power(evaluate_node(*node.lhs, vars), node.index);
  }
  throw EvalError("corrupt expression node");
}

}  // namespace diffgram::expr
