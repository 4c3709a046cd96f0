#pragma once

#include "diffgram/vector_field.h"

namespace diffgram {

struct SymmetricEigen {
  Vector values;   // ascending
  Matrix vectors;  // columns are eigenvectors
};

/// Cyclic Jacobi eigen-decomposition of a symmetric matrix. Only the upper
/// triangle is trusted; the input is symmetrized first.
SymmetricEigen jacobi_eigen(const Matrix& A, double tol = 1e-15, int max_sweeps = 100);

/// Singular values (descending) by one-sided Jacobi rotations.
Vector jacobi_singular_values(const Matrix& A, double tol = 1e-15, int max_sweeps = 100);

/// Solves A X + X A^T = -C for X by a dense Kronecker-product solve.
/// Intended for small n; the result is symmetrized when C is symmetric.
Matrix solve_lyapunov(const Matrix& A, const Matrix& C);

/// (M + M^T) / 2.
Matrix symmetrize(const Matrix& M);

}  // namespace diffgram
