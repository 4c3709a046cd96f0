#include "diffgram/linalg.h"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>

#include "diffgram/errors.h"

namespace diffgram {

Matrix symmetrize(const Matrix& M) { return 0.5 * (M + M.transpose()); }

SymmetricEigen jacobi_eigen(const Matrix& A_in, double tol, int max_sweeps) {
  if (A_in.rows() != A_in.cols()) throw ModelError("eigen-decomposition needs a square matrix");
  const Eigen::Index n = A_in.rows();
  Matrix A = symmetrize(A_in);
  Matrix V = Matrix::Identity(n, n);

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) off += A(p, q) * A(p, q);
    }
    if (std::sqrt(off) <= tol * std::max(A.norm(), 1e-300)) break;

    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (A(p, q) == 0.0) continue;
        const double theta = (A(q, q) - A(p, p)) / (2.0 * A(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = A(k, p);
          const double akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = A(p, k);
          const double aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = V(k, p);
          const double vkq = V(k, q);
          V(k, p) = c * vkp - s * vkq;
          V(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(n);
  for (Eigen::Index i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index a, Eigen::Index b) { return A(a, a) < A(b, b); });
  SymmetricEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values[i] = A(order[i], order[i]);
    out.vectors.col(i) = V.col(order[i]);
  }
  return out;
}

Vector jacobi_singular_values(const Matrix& A, double tol, int max_sweeps) {
  // Work on the orientation with fewer columns so the rotation count stays small.
  Matrix U = A.cols() <= A.rows() ? A : Matrix(A.transpose());
  const Eigen::Index k = U.cols();
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (Eigen::Index p = 0; p < k; ++p) {
      for (Eigen::Index q = p + 1; q < k; ++q) {
        const double alpha = U.col(p).squaredNorm();
        const double beta = U.col(q).squaredNorm();
        const double gamma = U.col(p).dot(U.col(q));
        if (gamma == 0.0 || std::abs(gamma) <= tol * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        const Vector up = U.col(p);
        U.col(p) = c * up - s * U.col(q);
        U.col(q) = s * up + c * U.col(q);
      }
    }
    if (!rotated) break;
  }
  Vector sigma(k);
  for (Eigen::Index i = 0; i < k; ++i) sigma[i] = U.col(i).norm();
  std::sort(sigma.data(), sigma.data() + k, std::greater<double>());
  return sigma;
}

Matrix solve_lyapunov(const Matrix& A, const Matrix& C) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n || C.rows() != n || C.cols() != n) {
    throw ModelError("Lyapunov solve needs square matrices of equal size");
  }
  // vec(A X + X A^T) = (I (x) A + A (x) I) vec(X), column-major vec.
  const Matrix I = Matrix::Identity(n, n);
  Matrix K = Matrix::Zero(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      K.block(i * n, j * n, n, n) += I(i, j) * A + A(i, j) * I;
    }
  }
  const Matrix Cm = C;
  const Vector rhs = -Eigen::Map<const Vector>(Cm.data(), n * n);
  Eigen::FullPivLU<Matrix> lu(K);
  if (!lu.isInvertible()) throw ModelError("Lyapunov operator is singular");
  const Vector x = lu.solve(rhs);
  Matrix X = Eigen::Map<const Matrix>(x.data(), n, n);
  if ((C - C.transpose()).norm() == 0.0) X = symmetrize(X);
  return X;
}

}  // namespace diffgram
