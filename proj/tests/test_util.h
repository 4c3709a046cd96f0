#pragma once

#include <cmath>
#include <functional>

#include <Eigen/QR>

#include "diffgram/registry.h"

namespace diffgram::testing {

inline Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

// Central differences with one Richardson step; an oracle independent of the
// dual-number machinery.
inline Matrix fd_jacobian(const std::function<Vector(const Vector&)>& fn, const Vector& x,
                          double h = 1e-4) {
  const Vector f0 = fn(x);
  Matrix J(f0.size(), x.size());
  for (Eigen::Index c = 0; c < x.size(); ++c) {
    auto central = [&](double step) {
      Vector xp = x, xm = x;
      xp[c] += step;
      xm[c] -= step;
      return Vector((fn(xp) - fn(xm)) / (2 * step));
    };
    J.col(c) = (4 * central(h / 2) - central(h)) / 3;
  }
  return J;
}

// Closed-loop brackets of the built-in example, derived by hand from the
// frozen-input recursion.
inline Vector sec5_ad1(const Vector& x) {
  const double a = x[0];
  return vec({1.5 + 3 * a + 2 * a * a + 2 * a * a * a / 3, 0.5});
}

inline Vector sec5_ad2(const Vector& x) {
  const double a = x[0];
  return vec({1.25 + 5 * a + 33 * a * a / 4 + 22 * a * a * a / 3 + 10 * std::pow(a, 4) / 3 +
                  2 * std::pow(a, 5) / 3,
              0.25});
}

// The closed forms as usually quoted for this example. The first drops
// x1 + x1^2 + x1^3/3; the second is the recursion applied to the first.
inline Vector printed_ad1(const Vector& x) {
  const double a = x[0];
  return vec({1.5 + 2 * a + a * a + a * a * a / 3, 0.5});
}

inline Vector printed_ad2(const Vector& x) {
  const double a = x[0];
  return vec({1.25 + 4 * a + 21 * a * a / 4 + 4 * a * a * a + 5 * std::pow(a, 4) / 3 +
                  std::pow(a, 5) / 3,
              0.25});
}

// Solves A^T X + X A = -S by vectorizing with plain loops.
inline Matrix lyapunov_oracle(const Matrix& A, const Matrix& S) {
  const Eigen::Index n = A.rows();
  Matrix K = Matrix::Zero(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const Eigen::Index row = i * n + j;
      for (Eigen::Index k = 0; k < n; ++k) {
        K(row, k * n + j) += A(k, i);  // (A^T X)_ij
        K(row, i * n + k) += A(k, j);  // (X A)_ij
      }
    }
  }
  Vector rhs(n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) rhs[i * n + j] = -S(i, j);
  }
  const Vector sol = K.colPivHouseholderQr().solve(rhs);
  Matrix X(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) X(i, j) = sol[i * n + j];
  }
  return X;
}

}  // namespace diffgram::testing
