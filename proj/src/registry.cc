#include "diffgram/registry.h"

#include <filesystem>

#include <Eigen/LU>

#include "diffgram/errors.h"
#include "diffgram/linalg.h"

namespace diffgram {
namespace {

std::vector<expr::Expression> parse_all(const std::vector<std::string>& texts) {
  std::vector<expr::Expression> out;
  for (const auto& t : texts) out.push_back(expr::parse_expression(t));
  return out;
}

Vector row_major(const Matrix& M) {
  Vector flat(M.size());
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    for (Eigen::Index c = 0; c < M.cols(); ++c) flat[r * M.cols() + c] = M(r, c);
  }
  return flat;
}

RegisteredSystem paper_sec5() {
  const int n = 2;
  VectorField f = field_from_expressions(
      n, parse_all({"-x1/2 - x1^2 - x1^3/3 - x1*x2 - x2", "-x2/2"}));
  VectorField g = field_from_expressions(n, parse_all({"1 + x1", "1"}));
  VectorField h = field_from_expressions(n, parse_all({"x1"}));
  VectorField k = field_from_expressions(n, parse_all({"x1 + x1^2/2 + x2"}));
  RegisteredSystem sys{"paper_sec5", SystemModel(f, g, h, k), {}, std::nullopt};
  sys.certificates.emplace("P", MatrixField::constant(n, Matrix::Identity(n, n)));
  sys.certificates.emplace("R", MatrixField::constant(n, Matrix::Identity(n, n)));
  return sys;
}

}  // namespace

const MatrixField& RegisteredSystem::certificate(const std::string& key) const {
  auto it = certificates.find(key);
  if (it == certificates.end()) {
    throw ModelError("system '" + name + "' has no certificate " + key);
  }
  return it->second;
}

SystemModel linear_system(const Matrix& A, const Matrix& B, const Matrix& C,
                          const std::optional<Matrix>& K) {
  const int n = static_cast<int>(A.rows());
  if (A.cols() != n || B.rows() != n || C.cols() != n) {
    throw ModelError("inconsistent linear system dimensions");
  }
  std::optional<VectorField> k;
  if (K) {
    if (K->rows() != B.cols() || K->cols() != n) throw ModelError("K must be m x n");
    k = linear_field(*K);
  }
  return SystemModel(linear_field(A), constant_field(n, row_major(B)), linear_field(C), k);
}

RegisteredSystem linear_registered(const std::string& name, const Matrix& A, const Matrix& B,
                                   const Matrix& C, const std::optional<Matrix>& K) {
  const int n = static_cast<int>(A.rows());
  const Matrix Q = solve_lyapunov(A.transpose(), C.transpose() * C);
  const Matrix P = solve_lyapunov(A, B * B.transpose());
  const Matrix R = symmetrize(P.inverse());
  const Matrix gain = K ? *K : Matrix(B.transpose() * R);
  RegisteredSystem sys{name, linear_system(A, B, C, gain), {}, LinearData{A, B, C, gain}};
  sys.certificates.emplace("Q", MatrixField::constant(n, Q));
  sys.certificates.emplace("P", MatrixField::constant(n, P));
  sys.certificates.emplace("R", MatrixField::constant(n, R));
  return sys;
}

std::vector<std::string> registry_names() { return {"paper_sec5", "linear_scalar", "linear_2x2"}; }

RegisteredSystem registry(const std::string& name) {
  if (name == "paper_sec5") return paper_sec5();
  if (name == "linear_scalar") {
    const Matrix A = Matrix::Constant(1, 1, -1.0);
    const Matrix B = Matrix::Constant(1, 1, 1.0);
    const Matrix C = Matrix::Constant(1, 1, 1.0);
    return linear_registered(name, A, B, C, Matrix::Constant(1, 1, 2.0));
  }
  if (name == "linear_2x2") {
    Matrix A(2, 2);
    A << 0, 1, -2, -3;
    Matrix B(2, 1);
    B << 0, 1;
    Matrix C(1, 2);
    C << 1, 0;
    return linear_registered(name, A, B, C);
  }
  std::string known;
  for (const auto& n : registry_names()) known += (known.empty() ? "" : ", ") + n;
  throw ModelError("unknown system '" + name + "' (known: " + known + ")");
}

RegisteredSystem system_from_spec(const SystemSpec& spec, const std::string& name) {
  std::optional<VectorField> k;
  if (spec.k) k = field_from_expressions(spec.n, *spec.k);
  RegisteredSystem sys{name,
                       SystemModel(field_from_expressions(spec.n, spec.f),
                                   field_from_expressions(spec.n, spec.g),
                                   field_from_expressions(spec.n, spec.h), k),
                       {},
                       std::nullopt};
  for (const auto& [key, entries] : spec.fields) {
    sys.certificates.emplace(
        key, MatrixField::exact(field_from_expressions(spec.n, entries), spec.n, spec.n));
  }
  return sys;
}

RegisteredSystem load_system(const std::string& source) {
  for (const auto& n : registry_names()) {
    if (n == source) return registry(source);
  }
  if (std::filesystem::exists(source)) {
    return system_from_spec(load_system_spec(source), std::filesystem::path(source).stem());
  }
  return registry(source);  // reports the unknown name
}

}  // namespace diffgram
