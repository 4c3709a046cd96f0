#include "diffgram/system_model.h"

#include "diffgram/errors.h"

namespace diffgram {

void value_and_jacobian(const VectorField& field, const Vector& x, Vector& value,
                        Matrix& jacobian) {
  const int n = field.dim_in();
  if (x.size() != n) throw ModelError("field evaluated at wrong dimension");
  std::vector<DualD> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = DualD::variable(x[i], i, n);
  const std::vector<DualD> out = field.evaluate(xs);
  value.resize(field.dim_out());
  jacobian.resize(field.dim_out(), n);
  for (int r = 0; r < field.dim_out(); ++r) {
    value[r] = out[r].value();
    for (int c = 0; c < n; ++c) jacobian(r, c) = out[r].tangent(c);
  }
}

Matrix Linearization::frozen_jacobian(const Vector& u) const {
  Matrix J = df;
  for (std::size_t j = 0; j < dg.size(); ++j) J += dg[j] * u[static_cast<Eigen::Index>(j)];
  return J;
}

Matrix Linearization::frozen_closed_loop_jacobian() const {
  if (k.size() != static_cast<Eigen::Index>(dg.size())) {
    throw ModelError("closed-loop Jacobian requires the feedback k");
  }
  return frozen_jacobian(k);
}

Matrix Linearization::closed_loop_jacobian() const {
  return frozen_closed_loop_jacobian() + g * dk;
}

Vector Linearization::closed_loop_drift() const {
  if (k.size() != g.cols()) throw ModelError("closed-loop drift requires the feedback k");
  return f + g * k;
}

SystemModel::SystemModel(VectorField f, VectorField g, VectorField h,
                         std::optional<VectorField> k)
    : n_(f.dim_in()),
      m_(n_ > 0 ? g.dim_out() / n_ : 0),
      p_(h.dim_out()),
      f_(std::move(f)),
      g_(std::move(g)),
      h_(std::move(h)),
      k_(std::move(k)) {
  if (f_.dim_out() != n_) throw ModelError("f must map R^n to R^n");
  if (g_.dim_in() != n_ || g_.dim_out() != n_ * m_) {
    throw ModelError("g must map R^n to n x m matrices");
  }
  if (h_.dim_in() != n_) throw ModelError("h must be defined on R^n");
  if (k_ && (k_->dim_in() != n_ || k_->dim_out() != m_)) {
    throw ModelError("k must map R^n to R^m");
  }
}

const VectorField& SystemModel::k() const {
  if (!k_) throw ModelError("operation requires a feedback k, but the system has none");
  return *k_;
}

VectorField SystemModel::input_column(int j) const { return column_field(g_, n_, m_, j); }

VectorField SystemModel::closed_loop_field() const {
  const VectorField kf = k();
  return make_vector_field(n_, n_, [f = f_, g = g_, kf, n = n_, m = m_](auto x, auto out) {
    using T = typename decltype(out)::value_type;
    std::vector<T> gv(static_cast<std::size_t>(n) * m);
    std::vector<T> kv(m);
    f.evaluate(x, out);
    g.evaluate(x, std::span<T>(gv));
    kf.evaluate(x, std::span<T>(kv));
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < m; ++c) out[r] = out[r] + gv[r * m + c] * kv[c];
    }
  });
}

SystemModel SystemModel::with_feedback(VectorField k) const {
  return SystemModel(f_, g_, h_, std::move(k));
}

SystemModel SystemModel::without_feedback() const { return SystemModel(f_, g_, h_); }

Matrix SystemModel::input_matrix(const Vector& x) const {
  const Vector flat = g_(x);
  Matrix G(n_, m_);
  for (int r = 0; r < n_; ++r) {
    for (int c = 0; c < m_; ++c) G(r, c) = flat[r * m_ + c];
  }
  return G;
}

Linearization SystemModel::linearize(const Vector& x, unsigned parts) const {
  if (x.size() != n_) throw ModelError("state has wrong dimension");
  Linearization lin;
  std::vector<DualD> xs(n_);
  for (int i = 0; i < n_; ++i) xs[i] = DualD::variable(x[i], i, n_);

  if (parts & kDrift) {
    const auto out = f_.evaluate(xs);
    lin.f.resize(n_);
    lin.df.resize(n_, n_);
    for (int r = 0; r < n_; ++r) {
      lin.f[r] = out[r].value();
      for (int c = 0; c < n_; ++c) lin.df(r, c) = out[r].tangent(c);
    }
  }
  if (parts & kInput) {
    const auto out = g_.evaluate(xs);
    lin.g.resize(n_, m_);
    lin.dg.assign(m_, Matrix(n_, n_));
    for (int r = 0; r < n_; ++r) {
      for (int j = 0; j < m_; ++j) {
        const DualD& e = out[r * m_ + j];
        lin.g(r, j) = e.value();
        for (int c = 0; c < n_; ++c) lin.dg[j](r, c) = e.tangent(c);
      }
    }
  }
  if (parts & kOutput) {
    const auto out = h_.evaluate(xs);
    lin.h.resize(p_);
    lin.dh.resize(p_, n_);
    for (int r = 0; r < p_; ++r) {
      lin.h[r] = out[r].value();
      for (int c = 0; c < n_; ++c) lin.dh(r, c) = out[r].tangent(c);
    }
  }
  if ((parts & kFeedback) && k_) {
    const auto out = k_->evaluate(xs);
    lin.k.resize(m_);
    lin.dk.resize(m_, n_);
    for (int r = 0; r < m_; ++r) {
      lin.k[r] = out[r].value();
      for (int c = 0; c < n_; ++c) lin.dk(r, c) = out[r].tangent(c);
    }
  }
  return lin;
}

}  // namespace diffgram
