#include "diffgram/calculus.h"

#include "diffgram/errors.h"

namespace diffgram {
namespace {

std::vector<Jet> evaluate_jets(const VectorField& field, const Vector& x,
                               const std::shared_ptr<const JetSpace>& space) {
  std::vector<Jet> xs;
  xs.reserve(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    xs.push_back(Jet::variable(space, static_cast<int>(i), x[i]));
  }
  return field.evaluate(xs);
}

Vector values(const std::vector<Jet>& jets) {
  Vector v(static_cast<Eigen::Index>(jets.size()));
  for (std::size_t i = 0; i < jets.size(); ++i) v[static_cast<Eigen::Index>(i)] = jets[i].value();
  return v;
}

// ad(W) = dW/dx drift - F W, with every factor as a jet.
std::vector<Jet> bracket_step(const std::vector<Jet>& W, const std::vector<Jet>& drift,
                              const std::vector<std::vector<Jet>>& F) {
  const std::size_t n = W.size();
  std::vector<Jet> out(n, Jet(0.0));
  for (std::size_t r = 0; r < n; ++r) {
    Jet acc(0.0);
    for (std::size_t s = 0; s < n; ++s) {
      acc = acc + W[r].derivative(static_cast<int>(s)) * drift[s] - F[r][s] * W[s];
    }
    out[r] = acc;
  }
  return out;
}

std::vector<Vector> bracket_sequence(const std::vector<Jet>& V, const std::vector<Jet>& drift,
                                     const std::vector<std::vector<Jet>>& F, int depth) {
  std::vector<Vector> seq;
  std::vector<Jet> W = V;
  seq.push_back(values(W));
  for (int i = 1; i <= depth; ++i) {
    W = bracket_step(W, drift, F);
    seq.push_back(values(W));
  }
  return seq;
}

void check_square_field(const VectorField& V, int n, const char* what) {
  if (V.dim_in() != n || V.dim_out() != n) {
    throw ModelError(std::string(what) + " must map R^n to R^n");
  }
}

}  // namespace

Matrix jacobian(const VectorField& field, const Vector& x) {
  Vector value;
  Matrix J;
  value_and_jacobian(field, x, value, J);
  return J;
}

Vector ad_closed_loop(const SystemModel& sys, const VectorField& V, const Vector& x) {
  if (!sys.has_feedback()) throw ModelError("closed-loop bracket requires a feedback k");
  check_square_field(V, sys.n(), "bracket argument");
  const Linearization lin =
      sys.linearize(x, SystemModel::kDrift | SystemModel::kInput | SystemModel::kFeedback);
  Vector v;
  Matrix dV;
  value_and_jacobian(V, x, v, dV);
  return dV * lin.closed_loop_drift() - lin.frozen_closed_loop_jacobian() * v;
}

Vector ad_standard(const VectorField& f, const VectorField& V, const Vector& x) {
  check_square_field(f, f.dim_in(), "drift");
  check_square_field(V, f.dim_in(), "bracket argument");
  Vector fv, v;
  Matrix df, dV;
  value_and_jacobian(f, x, fv, df);
  value_and_jacobian(V, x, v, dV);
  return dV * fv - df * v;
}

std::vector<Vector> closed_loop_bracket_sequence(const SystemModel& sys, const VectorField& V,
                                                 const Vector& x, int depth) {
  if (!sys.has_feedback()) throw ModelError("closed-loop bracket requires a feedback k");
  check_square_field(V, sys.n(), "bracket argument");
  if (depth < 0) throw ModelError("bracket depth must be non-negative");
  const int n = sys.n();
  const int m = sys.m();
  auto space = std::make_shared<const JetSpace>(n, std::max(depth, 1));
  const std::vector<Jet> f = evaluate_jets(sys.f(), x, space);
  const std::vector<Jet> g = evaluate_jets(sys.g(), x, space);
  const std::vector<Jet> k = evaluate_jets(sys.k(), x, space);

  std::vector<Jet> drift = f;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < m; ++c) drift[r] = drift[r] + g[r * m + c] * k[c];
  }
  // Frozen-u Jacobian: differentiate f and g first, substitute u = k(x) after.
  std::vector<std::vector<Jet>> F(n, std::vector<Jet>(n, Jet(0.0)));
  for (int r = 0; r < n; ++r) {
    for (int s = 0; s < n; ++s) {
      Jet entry = f[r].derivative(s);
      for (int c = 0; c < m; ++c) entry = entry + g[r * m + c].derivative(s) * k[c];
      F[r][s] = entry;
    }
  }
  return bracket_sequence(evaluate_jets(V, x, space), drift, F, depth);
}

std::vector<Vector> standard_bracket_sequence(const VectorField& f, const VectorField& V,
                                              const Vector& x, int depth) {
  const int n = f.dim_in();
  check_square_field(f, n, "drift");
  check_square_field(V, n, "bracket argument");
  if (depth < 0) throw ModelError("bracket depth must be non-negative");
  auto space = std::make_shared<const JetSpace>(n, std::max(depth, 1));
  const std::vector<Jet> fj = evaluate_jets(f, x, space);
  std::vector<std::vector<Jet>> F(n, std::vector<Jet>(n, Jet(0.0)));
  for (int r = 0; r < n; ++r) {
    for (int s = 0; s < n; ++s) F[r][s] = fj[r].derivative(s);
  }
  return bracket_sequence(evaluate_jets(V, x, space), fj, F, depth);
}

LieDerivative lie_derivative_scalar(const VectorField& f, const VectorField& h, const Vector& x) {
  const int n = f.dim_in();
  check_square_field(f, n, "drift");
  if (h.dim_in() != n || h.dim_out() != 1) throw ModelError("h must be scalar-valued on R^n");

  std::vector<DualDD> xs(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = DualDD(DualD::variable(x[i], i, n), n);
    xs[i].set_tangent(i, DualD(1.0));
  }
  const DualDD hv = h.evaluate(xs)[0];

  std::vector<DualD> xd(n);
  for (int i = 0; i < n; ++i) xd[i] = DualD::variable(x[i], i, n);
  const std::vector<DualD> fv = f.evaluate(xd);

  // Outer tangent j of h carries dh/dx_j together with its own gradient.
  DualD lie(0.0);
  for (int j = 0; j < n; ++j) lie = lie + hv.tangent(j) * fv[j];

  LieDerivative out;
  out.value = lie.value();
  out.gradient.resize(n);
  for (int i = 0; i < n; ++i) out.gradient[i] = lie.tangent(i);
  return out;
}

Matrix lie_derivative_gradients(const VectorField& f, const VectorField& h, const Vector& x,
                                int depth) {
  const int n = f.dim_in();
  check_square_field(f, n, "drift");
  if (h.dim_in() != n) throw ModelError("h must be defined on R^n");
  if (depth < 0) throw ModelError("Lie derivative depth must be non-negative");
  const int p = h.dim_out();
  auto space = std::make_shared<const JetSpace>(n, depth + 1);
  const std::vector<Jet> fj = evaluate_jets(f, x, space);
  std::vector<Jet> L = evaluate_jets(h, x, space);

  Matrix rows(static_cast<Eigen::Index>(depth + 1) * p, n);
  for (int i = 0; i <= depth; ++i) {
    for (int j = 0; j < p; ++j) rows.row(i * p + j) = L[j].gradient().transpose();
    if (i == depth) break;
    for (int j = 0; j < p; ++j) {
      Jet next(0.0);
      for (int s = 0; s < n; ++s) next = next + L[j].derivative(s) * fj[s];
      L[j] = next;
    }
  }
  return rows;
}

Matrix matrix_field_directional(const MatrixField& M, const Vector& x, const Vector& v) {
  if (v.size() != M.dim_in()) throw ModelError("direction has wrong dimension");
  return M.directional(x, v);
}

}  // namespace diffgram
