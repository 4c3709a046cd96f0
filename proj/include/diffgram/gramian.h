#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "diffgram/grid.h"
#include "diffgram/quadrature.h"
#include "diffgram/system_model.h"

namespace diffgram {

struct GramianResult {
  /// Symmetric n x n.
  Matrix matrix;
  double truncation_error = 0.0;
  double horizon = 0.0;
};

/// Q(x) = int_0^inf (dh/dx Phi(t))^T (dh/dx Phi(t)) dt along the zero-input
/// flow, with Phi the flow Jacobian.
GramianResult empirical_obs_gramian(const SystemModel& sys, const Vector& x,
                                    const ImproperOptions& options = {});

/// R(x) = int_{-inf}^0 (dk/dx Phi_k(t))^T (dk/dx Phi_k(t)) dt along the
/// closed-loop flow.
GramianResult empirical_ctrl_gramian(const SystemModel& sys, const Vector& x,
                                     const ImproperOptions& options = {});

/// Q, R as pointwise matrix fields (for residuals and scans).
MatrixField empirical_obs_field(const SystemModel& sys, const ImproperOptions& options = {});
MatrixField empirical_ctrl_field(const SystemModel& sys, const ImproperOptions& options = {});

enum class EquationId {
  kLyapunovObservability,   // dLya_ob
  kRiccatiControllability,  // dRicc_con
  kRiccatiGain,             // dRicc_gain
  kLyapunovControllability, // dLya_con
  kLyapunovGain,            // dLya_gain
  kLyapunovOpen,            // dLya_open
};

std::string equation_name(EquationId id);

struct ResidualReport {
  EquationId equation;
  /// n x n residual, or m x n for the gain equations.
  Matrix residual;
  double frobenius_norm = 0.0;
};

/// sum_i dQ/dx_i f_i + Q df/dx + df/dx^T Q + dh/dx^T dh/dx.
ResidualReport lyap_residual_obs(const SystemModel& sys, const MatrixField& Q, const Vector& x);

/// With A = d(f + g k)/dx (full Jacobian):
///   first:  sum_i dR/dx_i (f + g k)_i + R A + A^T R - dk/dx^T dk/dx
///   second: dk/dx - g^T R
std::pair<ResidualReport, ResidualReport> riccati_residual(const SystemModel& sys,
                                                           const MatrixField& R,
                                                           const Vector& x);

/// With F the frozen-u Jacobian at u = k(x):
///   first:  -sum_i dP/dx_i (f + g k)_i + P F^T + F P + g g^T
///   second: dk/dx P - g^T
std::pair<ResidualReport, ResidualReport> lyap_residual_ctrl(const SystemModel& sys,
                                                             const MatrixField& P,
                                                             const Vector& x);

/// -sum_i dPbar/dx_i f_i + Pbar df/dx^T + df/dx Pbar + g g^T.
ResidualReport lyap_residual_open(const SystemModel& sys, const MatrixField& Pbar,
                                  const Vector& x);

struct PDScan {
  Box region;
  std::vector<int> shape;
  std::vector<Vector> points;
  std::vector<double> min_eig;
  std::vector<double> det;
  /// "ok", or the evaluation failure at that point.
  std::vector<std::string> status;

  /// Points with status ok and min_eig > 0.
  std::size_t positive_count() const;
  bool all_positive_definite() const;
  /// Columns x1..xn, min_eig, det, status.
  void write_csv(std::ostream& out) const;
};

using SymmetricField = std::function<Matrix(const Vector&)>;

/// Minimum eigenvalue (cyclic Jacobi) and determinant of `field` on the grid.
/// Failures are recorded per point; points are evaluated on up to `jobs`
/// threads and assembled in grid order.
PDScan pd_scan(const SymmetricField& field, const Box& region, const std::vector<int>& shape,
               int jobs = 1);

}  // namespace diffgram
