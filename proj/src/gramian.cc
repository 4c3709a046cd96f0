#include "diffgram/gramian.h"

#include <cmath>
#include <limits>

#include <Eigen/LU>

#include "diffgram/errors.h"
#include "diffgram/linalg.h"
#include "diffgram/ode.h"
#include "diffgram/parallel.h"

namespace diffgram {
namespace {

// Integrates (C Phi)^T (C Phi) where C = output_jacobian(x) along `field`.
GramianResult matrix_gramian(const VectorField& field, const VectorField& output,
                             const Vector& x, TimeDirection direction,
                             const ImproperOptions& options) {
  const int n = field.dim_in();
  const OdeRhs rhs = variational_matrix_rhs(field);
  Vector y0(n + n * n);
  y0.head(n) = x;
  Eigen::Map<Matrix>(y0.data() + n, n, n) = Matrix::Identity(n, n);
  const TimeIntegralResult r = improper_time_integral(
      rhs, y0, n * n,
      [output, n](double, const Vector& y, Vector& out) {
        Vector v;
        Matrix C;
        value_and_jacobian(output, y.head(n), v, C);
        const Matrix CPhi = C * Eigen::Map<const Matrix>(y.data() + n, n, n);
        Eigen::Map<Matrix>(out.data(), n, n) = CPhi.transpose() * CPhi;
      },
      direction, options);
  GramianResult g;
  g.matrix = symmetrize(Eigen::Map<const Matrix>(r.value.data(), n, n));
  g.truncation_error = r.abs_error_estimate;
  g.horizon = r.truncation_horizon;
  return g;
}

ResidualReport make_report(EquationId id, Matrix residual) {
  const double norm = residual.norm();
  return ResidualReport{id, std::move(residual), norm};
}

void check_field(const SystemModel& sys, const MatrixField& M) {
  if (M.dim_in() != sys.n() || M.rows() != sys.n() || M.cols() != sys.n()) {
    throw ModelError("matrix field must map R^n to n x n matrices");
  }
}

}  // namespace

GramianResult empirical_obs_gramian(const SystemModel& sys, const Vector& x,
                                    const ImproperOptions& options) {
  return matrix_gramian(sys.f(), sys.h(), x, TimeDirection::kForward, options);
}

GramianResult empirical_ctrl_gramian(const SystemModel& sys, const Vector& x,
                                     const ImproperOptions& options) {
  return matrix_gramian(sys.closed_loop_field(), sys.k(), x, TimeDirection::kBackward, options);
}

MatrixField empirical_obs_field(const SystemModel& sys, const ImproperOptions& options) {
  return MatrixField::pointwise(sys.n(), sys.n(), sys.n(), [sys, options](const Vector& x) {
    return empirical_obs_gramian(sys, x, options).matrix;
  });
}

MatrixField empirical_ctrl_field(const SystemModel& sys, const ImproperOptions& options) {
  sys.k();
  return MatrixField::pointwise(sys.n(), sys.n(), sys.n(), [sys, options](const Vector& x) {
    return empirical_ctrl_gramian(sys, x, options).matrix;
  });
}

std::string equation_name(EquationId id) {
  switch (id) {
    case EquationId::kLyapunovObservability: return "dLya_ob";
    case EquationId::kRiccatiControllability: return "dRicc_con";
    case EquationId::kRiccatiGain: return "dRicc_gain";
    case EquationId::kLyapunovControllability: return "dLya_con";
    case EquationId::kLyapunovGain: return "dLya_gain";
    case EquationId::kLyapunovOpen: return "dLya_open";
  }
  return "unknown";
}

ResidualReport lyap_residual_obs(const SystemModel& sys, const MatrixField& Q, const Vector& x) {
  check_field(sys, Q);
  const Linearization lin = sys.linearize(x, SystemModel::kDrift | SystemModel::kOutput);
  const Matrix Qx = Q(x);
  Matrix res = Q.directional(x, lin.f) + Qx * lin.df + lin.df.transpose() * Qx +
               lin.dh.transpose() * lin.dh;
  return make_report(EquationId::kLyapunovObservability, std::move(res));
}

std::pair<ResidualReport, ResidualReport> riccati_residual(const SystemModel& sys,
                                                           const MatrixField& R,
                                                           const Vector& x) {
  check_field(sys, R);
  sys.k();
  const Linearization lin = sys.linearize(x);
  const Matrix A = lin.closed_loop_jacobian();
  const Matrix Rx = R(x);
  Matrix first = R.directional(x, lin.closed_loop_drift()) + Rx * A + A.transpose() * Rx -
                 lin.dk.transpose() * lin.dk;
  Matrix second = lin.dk - lin.g.transpose() * Rx;
  return {make_report(EquationId::kRiccatiControllability, std::move(first)),
          make_report(EquationId::kRiccatiGain, std::move(second))};
}

std::pair<ResidualReport, ResidualReport> lyap_residual_ctrl(const SystemModel& sys,
                                                             const MatrixField& P,
                                                             const Vector& x) {
  check_field(sys, P);
  sys.k();
  const Linearization lin = sys.linearize(x);
  const Matrix F = lin.frozen_closed_loop_jacobian();
  const Matrix Px = P(x);
  Matrix first = -P.directional(x, lin.closed_loop_drift()) + Px * F.transpose() + F * Px +
                 lin.g * lin.g.transpose();
  Matrix second = lin.dk * Px - lin.g.transpose();
  return {make_report(EquationId::kLyapunovControllability, std::move(first)),
          make_report(EquationId::kLyapunovGain, std::move(second))};
}

ResidualReport lyap_residual_open(const SystemModel& sys, const MatrixField& Pbar,
                                  const Vector& x) {
  check_field(sys, Pbar);
  const Linearization lin = sys.linearize(x, SystemModel::kDrift | SystemModel::kInput);
  const Matrix Px = Pbar(x);
  Matrix res = -Pbar.directional(x, lin.f) + Px * lin.df.transpose() + lin.df * Px +
               lin.g * lin.g.transpose();
  return make_report(EquationId::kLyapunovOpen, std::move(res));
}

std::size_t PDScan::positive_count() const {
  std::size_t count = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (status[i] == "ok" && min_eig[i] > 0.0) ++count;
  }
  return count;
}

bool PDScan::all_positive_definite() const {
  return !points.empty() && positive_count() == points.size();
}

void PDScan::write_csv(std::ostream& out) const {
  const int n = region.dim();
  for (int i = 0; i < n; ++i) out << 'x' << (i + 1) << ',';
  out << "min_eig,det,status\n";
  for (std::size_t k = 0; k < points.size(); ++k) {
    for (int i = 0; i < n; ++i) out << format_double(points[k][i]) << ',';
    out << format_double(min_eig[k]) << ',' << format_double(det[k]) << ',';
    // Keep the status a single CSV field.
    std::string s = status[k];
    for (char& c : s) {
      if (c == ',' || c == '\n') c = ';';
    }
    out << s << '\n';
  }
}

PDScan pd_scan(const SymmetricField& field, const Box& region, const std::vector<int>& shape,
               int jobs) {
  PDScan scan;
  scan.region = region;
  scan.shape = shape;
  scan.points = grid_points(region, shape);
  const std::size_t count = scan.points.size();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  scan.min_eig.assign(count, nan);
  scan.det.assign(count, nan);
  scan.status.assign(count, "ok");
  parallel_for(count, jobs, [&](std::size_t i) {
    try {
      const Matrix M = field(scan.points[i]);
      scan.min_eig[i] = jacobi_eigen(M).values[0];
      scan.det[i] = M.determinant();
    } catch (const std::exception& e) {
      scan.status[i] = std::string("error: ") + e.what();
    }
  });
  return scan;
}

}  // namespace diffgram
