#pragma once

#include <memory>
#include <vector>

#include <Eigen/Core>

namespace diffgram {

/**
 * Monomial bookkeeping for truncated multivariate Taylor polynomials in
 * `num_vars` variables up to total degree `order`. Monomials are ordered by
 * total degree, then lexicographically.
 */
class JetSpace {
 public:
  JetSpace(int num_vars, int order);

  int num_vars() const { return num_vars_; }
  int order() const { return order_; }
  int size() const { return static_cast<int>(exponents_.size()); }

  const std::vector<int>& exponents(int index) const { return exponents_[index]; }
  int degree(int index) const { return degrees_[index]; }
  /// Index of the monomial with the given exponents, or -1 if its degree
  /// exceeds the order.
  int index_of(const std::vector<int>& exponents) const;

  struct ProductTerm {
    int lhs;
    int rhs;
    int out;
  };
  /// Every (lhs, rhs) monomial pair whose product stays within the order.
  const std::vector<ProductTerm>& product_terms() const { return products_; }

  struct DerivativeTerm {
    int source;  // monomial differentiated
    int target;  // resulting monomial
    double factor;
  };
  const std::vector<DerivativeTerm>& derivative_terms(int var) const {
    return derivatives_[var];
  }

 private:
  int num_vars_;
  int order_;
  std::vector<std::vector<int>> exponents_;
  std::vector<int> degrees_;
  std::vector<ProductTerm> products_;
  std::vector<std::vector<DerivativeTerm>> derivatives_;
};

/**
 * Truncated Taylor polynomial about an expansion point. Coefficients are
 * polynomial coefficients in the displacement from that point, so the
 * constant term is the value and the linear terms are the gradient.
 *
 * `valid_order()` tracks how many degrees remain trustworthy: each
 * differentiation consumes one. A jet without a space is an exact constant.
 */
class Jet {
 public:
  Jet() = default;
  Jet(double c);  // NOLINT: constants convert implicitly

  static Jet variable(std::shared_ptr<const JetSpace> space, int var, double value);
  static Jet constant(std::shared_ptr<const JetSpace> space, double value);

  const std::shared_ptr<const JetSpace>& space() const { return space_; }
  double value() const { return coeffs_.empty() ? constant_ : coeffs_[0]; }
  double coeff(int index) const;
  int valid_order() const;

  /// Linear coefficients (requires valid order >= 1).
  Eigen::VectorXd gradient() const;

  /// Partial derivative in one variable; consumes one degree of validity.
  Jet derivative(int var) const;

  friend Jet operator+(const Jet& a, const Jet& b);
  friend Jet operator-(const Jet& a, const Jet& b);
  friend Jet operator-(const Jet& a);
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);

  Jet& operator+=(const Jet& o) { return *this = *this + o; }
  Jet& operator-=(const Jet& o) { return *this = *this - o; }
  Jet& operator*=(const Jet& o) { return *this = *this * o; }

 private:
  Jet(std::shared_ptr<const JetSpace> space, int valid_order);
  void truncate();
  Jet reciprocal() const;

  std::shared_ptr<const JetSpace> space_;
  std::vector<double> coeffs_;
  double constant_ = 0.0;
  int valid_order_ = 0;
};

inline double primal(const Jet& j) { return j.value(); }

}  // namespace diffgram
