#pragma once

#include <optional>
#include <vector>

#include "diffgram/vector_field.h"

namespace diffgram {

/**
 * Values and first derivatives of a model's functions at one point,
 * obtained from a single dual-number pass.
 */
struct Linearization {
  Vector f;                 // f(x)
  Matrix df;                // df/dx, n x n
  Matrix g;                 // g(x), n x m
  std::vector<Matrix> dg;   // dg_j/dx, one n x n matrix per input column
  Vector h;                 // h(x)
  Matrix dh;                // dh/dx, p x n
  Vector k;                 // k(x) (empty without feedback)
  Matrix dk;                // dk/dx, m x n (empty without feedback)

  /// df/dx + sum_j dg_j/dx u_j : the Jacobian of f + g u with u held fixed.
  Matrix frozen_jacobian(const Vector& u) const;
  /// Frozen-u Jacobian evaluated at u = k(x).
  Matrix frozen_closed_loop_jacobian() const;
  /// Full Jacobian of f + g k, including the dk/dx contribution.
  Matrix closed_loop_jacobian() const;
  Vector closed_loop_drift() const;
};

/**
 * Control-affine system  xdot = f(x) + g(x) u,  y = h(x),  with an optional
 * state feedback u = k(x). g is stored as a row-major n x m field.
 */
class SystemModel {
 public:
  SystemModel(VectorField f, VectorField g, VectorField h,
              std::optional<VectorField> k = std::nullopt);

  int n() const { return n_; }
  int m() const { return m_; }
  int p() const { return p_; }

  const VectorField& f() const { return f_; }
  /// Row-major n x m input matrix field.
  const VectorField& g() const { return g_; }
  const VectorField& h() const { return h_; }
  bool has_feedback() const { return k_.has_value(); }
  /// Throws ModelError when the model carries no feedback.
  const VectorField& k() const;

  /// Column j of g as an R^n -> R^n field.
  VectorField input_column(int j) const;
  /// f + g k as a field (requires feedback).
  VectorField closed_loop_field() const;

  SystemModel with_feedback(VectorField k) const;
  SystemModel without_feedback() const;

  Vector drift(const Vector& x) const { return f_(x); }
  Matrix input_matrix(const Vector& x) const;
  Vector output(const Vector& x) const { return h_(x); }
  Vector feedback(const Vector& x) const { return k()(x); }

  enum Parts : unsigned {
    kDrift = 1u,
    kInput = 2u,
    kOutput = 4u,
    kFeedback = 8u,
    kAll = 15u,
  };
  /// Values and Jacobians of the requested parts at x (feedback only if
  /// present).
  Linearization linearize(const Vector& x, unsigned parts = kAll) const;

 private:
  int n_;
  int m_;
  int p_;
  VectorField f_;
  VectorField g_;
  VectorField h_;
  std::optional<VectorField> k_;
};

/// Jacobian and value of a field at x via one multi-directional dual pass.
void value_and_jacobian(const VectorField& field, const Vector& x, Vector& value, Matrix& jacobian);

}  // namespace diffgram
