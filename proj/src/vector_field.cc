#include "diffgram/vector_field.h"

#include "diffgram/errors.h"

namespace diffgram {

Vector VectorField::operator()(const Vector& x) const {
  if (x.size() != dim_in_) throw ModelError("vector field evaluated at wrong dimension");
  Vector out(dim_out_);
  impl_->eval(std::span<const double>(x.data(), x.size()),
              std::span<double>(out.data(), out.size()));
  return out;
}

VectorField field_from_expressions(int dim_in, std::vector<expr::Expression> components) {
  for (const auto& c : components) {
    if (c.max_variable_index() > dim_in) {
      throw ModelError("expression references x" + std::to_string(c.max_variable_index()) +
                       " beyond dimension " + std::to_string(dim_in));
    }
  }
  const int dim_out = static_cast<int>(components.size());
  return make_vector_field(dim_in, dim_out,
                           [components = std::move(components)](auto x, auto out) {
                             for (std::size_t i = 0; i < components.size(); ++i) {
                               out[i] = components[i].evaluate(x);
                             }
                           });
}

VectorField constant_field(int dim_in, const Vector& value) {
  return make_vector_field(dim_in, static_cast<int>(value.size()), [value](auto, auto out) {
    using T = typename decltype(out)::value_type;
    for (Eigen::Index i = 0; i < value.size(); ++i) out[i] = T(value[i]);
  });
}

VectorField linear_field(const Matrix& A) {
  return make_vector_field(static_cast<int>(A.cols()), static_cast<int>(A.rows()),
                           [A](auto x, auto out) {
                             using T = typename decltype(out)::value_type;
                             for (Eigen::Index r = 0; r < A.rows(); ++r) {
                               T acc(0.0);
                               for (Eigen::Index c = 0; c < A.cols(); ++c) {
                                 if (A(r, c) != 0.0) acc = acc + T(A(r, c)) * x[c];
                               }
                               out[r] = acc;
                             }
                           });
}

VectorField column_field(const VectorField& matrix_field, int rows, int cols, int col) {
  return make_vector_field(
      matrix_field.dim_in(), rows, [matrix_field, rows, cols, col](auto x, auto out) {
        using T = typename decltype(out)::value_type;
        std::vector<T> all(static_cast<std::size_t>(rows) * cols);
        matrix_field.evaluate(x, std::span<T>(all));
        for (int r = 0; r < rows; ++r) out[r] = all[r * cols + col];
      });
}

MatrixField MatrixField::exact(VectorField entries, int rows, int cols) {
  if (entries.dim_out() != rows * cols) {
    throw ModelError("matrix field entry count does not match its shape");
  }
  MatrixField m;
  m.dim_in_ = entries.dim_in();
  m.rows_ = rows;
  m.cols_ = cols;
  m.entries_ = std::move(entries);
  return m;
}

MatrixField MatrixField::constant(int dim_in, const Matrix& value) {
  Vector flat(value.size());
  for (Eigen::Index r = 0; r < value.rows(); ++r) {
    for (Eigen::Index c = 0; c < value.cols(); ++c) flat[r * value.cols() + c] = value(r, c);
  }
  return exact(constant_field(dim_in, flat), static_cast<int>(value.rows()),
               static_cast<int>(value.cols()));
}

MatrixField MatrixField::pointwise(int dim_in, int rows, int cols, Pointwise fn, double step) {
  MatrixField m;
  m.dim_in_ = dim_in;
  m.rows_ = rows;
  m.cols_ = cols;
  m.pointwise_ = std::move(fn);
  m.step_ = step;
  return m;
}

Matrix MatrixField::operator()(const Vector& x) const {
  if (pointwise_) return pointwise_(x);
  const Vector flat = entries_(x);
  Matrix out(rows_, cols_);
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) out(r, c) = flat[r * cols_ + c];
  }
  return out;
}

Matrix MatrixField::directional(const Vector& x, const Vector& v) const {
  if (pointwise_) {
    const double norm = v.norm();
    if (norm == 0.0) return Matrix::Zero(rows_, cols_);
    const Vector u = v / norm;
    auto central = [&](double h) {
      return Matrix((pointwise_(x + h * u) - pointwise_(x - h * u)) / (2.0 * h));
    };
    // One Richardson step removes the O(h^2) term of the central difference.
    const Matrix coarse = central(step_);
    const Matrix fine = central(step_ / 2.0);
    return norm * (4.0 * fine - coarse) / 3.0;
  }
  // Single-direction dual: tangent of M(x + t v) at t = 0.
  std::vector<DualD> xs(dim_in_);
  for (int i = 0; i < dim_in_; ++i) {
    xs[i] = DualD(x[i], 1);
    xs[i].set_tangent(0, v[i]);
  }
  const std::vector<DualD> out = entries_.evaluate(xs);
  Matrix d(rows_, cols_);
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) d(r, c) = out[r * cols_ + c].tangent(0);
  }
  return d;
}

}  // namespace diffgram
