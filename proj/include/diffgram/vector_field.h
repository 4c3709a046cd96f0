#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "diffgram/dual.h"
#include "diffgram/expr.h"
#include "diffgram/jet.h"

namespace diffgram {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/**
 * A map R^n -> R^k that can be evaluated over plain doubles, first- and
 * second-order duals and Taylor jets. Instances are immutable and share
 * their evaluator, so copies are cheap and thread-safe.
 */
class VectorField {
 public:
  class Impl {
   public:
    virtual ~Impl() = default;
    virtual void eval(std::span<const double> x, std::span<double> out) const = 0;
    virtual void eval(std::span<const DualD> x, std::span<DualD> out) const = 0;
    virtual void eval(std::span<const DualDD> x, std::span<DualDD> out) const = 0;
    virtual void eval(std::span<const Jet> x, std::span<Jet> out) const = 0;
  };

  VectorField() = default;
  VectorField(int dim_in, int dim_out, std::shared_ptr<const Impl> impl)
      : dim_in_(dim_in), dim_out_(dim_out), impl_(std::move(impl)) {}

  int dim_in() const { return dim_in_; }
  int dim_out() const { return dim_out_; }
  bool valid() const { return impl_ != nullptr; }

  template <typename T>
  void evaluate(std::span<const T> x, std::span<T> out) const {
    impl_->eval(x, out);
  }

  template <typename T>
  std::vector<T> evaluate(const std::vector<T>& x) const {
    std::vector<T> out(dim_out_);
    impl_->eval(std::span<const T>(x), std::span<T>(out));
    return out;
  }

  Vector operator()(const Vector& x) const;

 private:
  int dim_in_ = 0;
  int dim_out_ = 0;
  std::shared_ptr<const Impl> impl_;
};

namespace internal {

template <typename Fn>
class LambdaField final : public VectorField::Impl {
 public:
  explicit LambdaField(Fn fn) : fn_(std::move(fn)) {}
  void eval(std::span<const double> x, std::span<double> out) const override { fn_(x, out); }
  void eval(std::span<const DualD> x, std::span<DualD> out) const override { fn_(x, out); }
  void eval(std::span<const DualDD> x, std::span<DualDD> out) const override { fn_(x, out); }
  void eval(std::span<const Jet> x, std::span<Jet> out) const override { fn_(x, out); }

 private:
  Fn fn_;
};

}  // namespace internal

/// Wraps a generic callable `fn(std::span<const T> x, std::span<T> out)`
/// (typically a lambda with `auto` parameters) as a VectorField.
template <typename Fn>
VectorField make_vector_field(int dim_in, int dim_out, Fn fn) {
  return VectorField(dim_in, dim_out,
                     std::make_shared<internal::LambdaField<Fn>>(std::move(fn)));
}

VectorField field_from_expressions(int dim_in, std::vector<expr::Expression> components);

VectorField constant_field(int dim_in, const Vector& value);

/// Linear map x -> A x.
VectorField linear_field(const Matrix& A);

/// Column `col` of a row-major rows x cols matrix-valued field.
VectorField column_field(const VectorField& matrix_field, int rows, int cols, int col);

/**
 * Matrix-valued field x -> M(x). Either exact (backed by a VectorField with
 * rows*cols row-major outputs, differentiated with duals) or pointwise
 * (only evaluable at doubles, differentiated by central differences with
 * one Richardson step).
 */
class MatrixField {
 public:
  using Pointwise = std::function<Matrix(const Vector&)>;

  MatrixField() = default;

  static MatrixField exact(VectorField entries, int rows, int cols);
  static MatrixField constant(int dim_in, const Matrix& value);
  static MatrixField pointwise(int dim_in, int rows, int cols, Pointwise fn,
                               double step = 1e-4);

  int dim_in() const { return dim_in_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool is_exact() const { return entries_.valid(); }
  const VectorField& entries() const { return entries_; }

  Matrix operator()(const Vector& x) const;

  /// sum_i dM/dx_i (x) v_i.
  Matrix directional(const Vector& x, const Vector& v) const;

 private:
  int dim_in_ = 0;
  int rows_ = 0;
  int cols_ = 0;
  VectorField entries_;
  Pointwise pointwise_;
  double step_ = 1e-4;
};

}  // namespace diffgram
