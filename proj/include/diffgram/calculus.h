#pragma once

#include <vector>

#include "diffgram/system_model.h"
#include "diffgram/vector_field.h"

namespace diffgram {

/// Exact Jacobian (k x n) of a polynomial/rational field at x.
Matrix jacobian(const VectorField& field, const Vector& x);

/**
 * One application of the closed-loop bracket
 *
 *   ad(V) = dV/dx (f + g k) - [d(f + g u)/dx]_{u = k(x)} V,
 *
 * where the second Jacobian holds u fixed and so excludes dk/dx terms.
 * Throws ModelError if the system has no feedback.
 */
Vector ad_closed_loop(const SystemModel& sys, const VectorField& V, const Vector& x);

/// Standard Lie bracket ad_f V = dV/dx f - df/dx V.
Vector ad_standard(const VectorField& f, const VectorField& V, const Vector& x);

/// [V, ad V, ..., ad^depth V] of the closed-loop bracket, using Taylor jets
/// of order `depth` so that every iterate is exact.
std::vector<Vector> closed_loop_bracket_sequence(const SystemModel& sys, const VectorField& V,
                                                 const Vector& x, int depth);

/// [V, ad_f V, ..., ad_f^depth V].
std::vector<Vector> standard_bracket_sequence(const VectorField& f, const VectorField& V,
                                              const Vector& x, int depth);

struct LieDerivative {
  double value = 0.0;
  Eigen::RowVectorXd gradient;
};

/// L_f h = dh/dx f for scalar h, and its gradient (second-order duals).
LieDerivative lie_derivative_scalar(const VectorField& f, const VectorField& h, const Vector& x);

/// Rows d(L_f^i h_j)/dx for i = 0..depth, j = 1..p (grouped by i).
Matrix lie_derivative_gradients(const VectorField& f, const VectorField& h, const Vector& x,
                                int depth);

/// sum_i dM/dx_i (x) v_i.
Matrix matrix_field_directional(const MatrixField& M, const Vector& x, const Vector& v);

}  // namespace diffgram
