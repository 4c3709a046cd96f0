#include "diffgram/gramian.h"

#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <gtest/gtest.h>

#include "diffgram/linalg.h"
#include "diffgram/registry.h"
#include "test_util.h"

namespace diffgram {
namespace {

using testing::lyapunov_oracle;
using testing::vec;

TEST(GramianTest, LinearObservabilityGramian) {
  const RegisteredSystem rs = registry("linear_2x2");
  const LinearData& L = *rs.linear;
  const Matrix oracle = lyapunov_oracle(L.A, L.C.transpose() * L.C);
  for (const Vector& x : {vec({0, 0}), vec({0.7, -2})}) {
    const GramianResult g = empirical_obs_gramian(rs.model, x);
    EXPECT_LT((g.matrix - oracle).norm(), 1e-7);
    EXPECT_GE(g.truncation_error, 0.0);
  }
}

TEST(GramianTest, LinearControllabilityGramian) {
  const RegisteredSystem rs = registry("linear_2x2");
  const LinearData& L = *rs.linear;
  // Backward integral of Phi^T K^T K Phi along A + B K.
  const Matrix Acl = L.A + L.B * *L.K;
  const Matrix oracle = lyapunov_oracle(-Acl, L.K->transpose() * *L.K);
  const GramianResult g = empirical_ctrl_gramian(rs.model, vec({0.1, 0.1}));
  EXPECT_LT((g.matrix - oracle).norm(), 1e-7);
  EXPECT_LT((g.matrix - rs.certificate("R")(vec({0, 0}))).norm(), 1e-7);
}

TEST(GramianTest, ExampleCertificatesSolveTheirEquations) {
  const RegisteredSystem rs = registry("paper_sec5");
  for (const Vector& x : {vec({0, 0}), vec({0.4, -0.3}), vec({-0.5, 0.5})}) {
    const auto [lya, gain] = lyap_residual_ctrl(rs.model, rs.certificate("P"), x);
    EXPECT_LE(lya.frobenius_norm, 1e-12);
    EXPECT_LE(gain.frobenius_norm, 1e-12);
    EXPECT_EQ(equation_name(lya.equation), "dLya_con");
    const auto [ric, rgain] = riccati_residual(rs.model, rs.certificate("R"), x);
    EXPECT_LE(ric.frobenius_norm, 1e-12);
    EXPECT_LE(rgain.frobenius_norm, 1e-12);
  }
}

TEST(GramianTest, EmpiricalQSolvesItsLyapunovEquation) {
  const SystemModel sys = registry("paper_sec5").model;
  const MatrixField Q = empirical_obs_field(sys);
  const ResidualReport r = lyap_residual_obs(sys, Q, vec({0.1, -0.2}));
  EXPECT_EQ(equation_name(r.equation), "dLya_ob");
  EXPECT_LT(r.frobenius_norm, 1e-5);
}

TEST(GramianTest, WrongCandidateHasLargeResidual) {
  const RegisteredSystem rs = registry("paper_sec5");
  const MatrixField twice = MatrixField::constant(2, 2 * Matrix::Identity(2, 2));
  EXPECT_GT(riccati_residual(rs.model, twice, vec({0.1, 0.1})).first.frobenius_norm, 0.1);
}

TEST(GramianTest, PdScanReportsSignsAndFailures) {
  Box box{vec({-1, -1}), vec({1, 1})};
  const PDScan scan = pd_scan(
      [](const Vector& x) {
        if (x[0] > 0.99) throw std::runtime_error("no value");
        Matrix M(2, 2);
        M << 1, x[1], x[1], 1;
        return M;
      },
      box, {3, 3}, 2);
  ASSERT_EQ(scan.points.size(), 9u);
  EXPECT_EQ(scan.positive_count(), 2u);  // x1 in {-1, 0}, x2 = 0
  EXPECT_FALSE(scan.all_positive_definite());
  EXPECT_NE(scan.status[8].find("no value"), std::string::npos);
  EXPECT_NEAR(scan.min_eig[4], 1.0, 1e-15);
  EXPECT_NEAR(scan.det[3], 0.0, 1e-15);
  std::ostringstream csv;
  scan.write_csv(csv);
  EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')), "x1,x2,min_eig,det,status");
}

TEST(GramianProperty, EmpiricalGramiansAreSymmetric) {
  const SystemModel sys = registry("paper_sec5").model;
  for (const Vector& x : {vec({0.2, 0.1}), vec({-0.25, 0.3})}) {
    const Matrix Q = empirical_obs_gramian(sys, x).matrix;
    const Matrix R = empirical_ctrl_gramian(sys, x).matrix;
    EXPECT_LT((Q - Q.transpose()).norm(), 1e-14);
    EXPECT_LT((R - R.transpose()).norm(), 1e-14);
    EXPECT_GT(jacobi_eigen(Q).values[0], 0.0);
  }
}

TEST(LinalgTest, JacobiAgainstEigen) {
  Matrix A(3, 3);
  A << 4, 1, -2, 1, 2, 0, -2, 0, 3;
  const SymmetricEigen e = jacobi_eigen(A);
  Eigen::SelfAdjointEigenSolver<Matrix> ref(A);
  EXPECT_LT((e.values - ref.eigenvalues()).norm(), 1e-13);
  EXPECT_LT((e.vectors * e.values.asDiagonal() * e.vectors.transpose() - A).norm(), 1e-13);

  Matrix B(2, 3);
  B << 1, 2, 3, 4, 5, 6;
  Eigen::JacobiSVD<Matrix> svd(B);
  EXPECT_LT((jacobi_singular_values(B) - svd.singularValues()).norm(), 1e-13);
}

TEST(LinalgTest, LyapunovAgainstOracle) {
  Matrix A(2, 2);
  A << -1, 2, 0, -3;
  Matrix C(2, 2);
  C << 2, 1, 1, 1;
  const Matrix X = solve_lyapunov(A, C);
  EXPECT_LT((A * X + X * A.transpose() + C).norm(), 1e-13);
  EXPECT_LT((X - lyapunov_oracle(A.transpose(), C)).norm(), 1e-13);
}

}  // namespace
}  // namespace diffgram
