#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "diffgram/system_model.h"
#include "diffgram/system_spec.h"
#include "diffgram/vector_field.h"

namespace diffgram {

/// xdot = A x + B u, y = C x, optional u = K x.
struct LinearData {
  Matrix A;
  Matrix B;
  Matrix C;
  std::optional<Matrix> K;
};

/**
 * A system together with any known closed-form matrix fields
 * ("P", "Q", "R") that solve its differential Lyapunov/Riccati equations.
 */
struct RegisteredSystem {
  std::string name;
  SystemModel model;
  std::map<std::string, MatrixField> certificates;
  std::optional<LinearData> linear;

  bool has_certificate(const std::string& key) const { return certificates.count(key) > 0; }
  /// Throws ModelError when absent.
  const MatrixField& certificate(const std::string& key) const;
};

/// Built-in systems: "paper_sec5", "linear_scalar", "linear_2x2".
RegisteredSystem registry(const std::string& name);
std::vector<std::string> registry_names();

SystemModel linear_system(const Matrix& A, const Matrix& B, const Matrix& C,
                          const std::optional<Matrix>& K = std::nullopt);

/// Linear system with certificates from algebraic Lyapunov solves:
/// Q from A^T Q + Q A = -C^T C, P from A P + P A^T = -B B^T, R = P^{-1},
/// and (when K is not given) the feedback K = B^T R.
RegisteredSystem linear_registered(const std::string& name, const Matrix& A, const Matrix& B,
                                   const Matrix& C, const std::optional<Matrix>& K = std::nullopt);

RegisteredSystem system_from_spec(const SystemSpec& spec, const std::string& name = "spec");

/// A registry name, or a path to a JSON system specification.
RegisteredSystem load_system(const std::string& source);

}  // namespace diffgram
