#include "diffgram/jet.h"

#include <algorithm>
#include <climits>
#include <map>

#include "diffgram/errors.h"

namespace diffgram {
namespace {

// Upper bound on the product table; beyond this the bracket depth is too
// large for dense jets.
constexpr std::size_t kMaxProductTerms = 20'000'000;

void enumerate(int num_vars, int degree, std::vector<int>& current, int var,
               std::vector<std::vector<int>>& out) {
  if (var == num_vars - 1) {
    current[var] = degree;
    out.push_back(current);
    return;
  }
  for (int e = degree; e >= 0; --e) {
    current[var] = e;
    enumerate(num_vars, degree - e, current, var + 1, out);
  }
  current[var] = 0;
}

}  // namespace

JetSpace::JetSpace(int num_vars, int order) : num_vars_(num_vars), order_(order) {
  if (num_vars < 1 || order < 0) {
    throw ModelError("jet space needs at least one variable and order >= 0");
  }
  std::vector<int> current(num_vars, 0);
  for (int d = 0; d <= order; ++d) {
    enumerate(num_vars, d, current, 0, exponents_);
  }
  for (const auto& e : exponents_) {
    int deg = 0;
    for (int v : e) deg += v;
    degrees_.push_back(deg);
  }

  std::map<std::vector<int>, int> lookup;
  for (int i = 0; i < size(); ++i) lookup.emplace(exponents_[i], i);

  std::vector<int> sum(num_vars);
  for (int i = 0; i < size(); ++i) {
    for (int j = 0; j < size(); ++j) {
      if (degrees_[i] + degrees_[j] > order) continue;
      for (int v = 0; v < num_vars; ++v) sum[v] = exponents_[i][v] + exponents_[j][v];
      products_.push_back({i, j, lookup.at(sum)});
      if (products_.size() > kMaxProductTerms) {
        throw ModelError("jet space too large; reduce the derivative order");
      }
    }
  }

  derivatives_.resize(num_vars);
  for (int v = 0; v < num_vars; ++v) {
    for (int i = 0; i < size(); ++i) {
      const int ev = exponents_[i][v];
      if (ev == 0) continue;
      std::vector<int> lowered = exponents_[i];
      --lowered[v];
      derivatives_[v].push_back({i, lookup.at(lowered), static_cast<double>(ev)});
    }
  }
}

int JetSpace::index_of(const std::vector<int>& exponents) const {
  auto it = std::find(exponents_.begin(), exponents_.end(), exponents);
  return it == exponents_.end() ? -1 : static_cast<int>(it - exponents_.begin());
}

Jet::Jet(double c) : constant_(c), valid_order_(INT_MAX) {}

Jet::Jet(std::shared_ptr<const JetSpace> space, int valid_order)
    : space_(std::move(space)), valid_order_(valid_order) {
  coeffs_.assign(space_->size(), 0.0);
}

Jet Jet::variable(std::shared_ptr<const JetSpace> space, int var, double value) {
  const int order = space->order();
  Jet j(std::move(space), order);
  j.coeffs_[0] = value;
  if (order >= 1) j.coeffs_[1 + var] = 1.0;
  return j;
}

Jet Jet::constant(std::shared_ptr<const JetSpace> space, double value) {
  const int order = space->order();
  Jet j(std::move(space), order);
  j.coeffs_[0] = value;
  return j;
}

double Jet::coeff(int index) const {
  if (!space_) return index == 0 ? constant_ : 0.0;
  return coeffs_[index];
}

int Jet::valid_order() const {
  if (!space_) return INT_MAX;
  return valid_order_;
}

Eigen::VectorXd Jet::gradient() const {
  if (!space_) return Eigen::VectorXd();
  if (valid_order_ < 1) {
    throw ModelError("jet has no valid first-order terms left");
  }
  Eigen::VectorXd g(space_->num_vars());
  for (int v = 0; v < space_->num_vars(); ++v) g[v] = coeffs_[1 + v];
  return g;
}

void Jet::truncate() {
  for (int i = 0; i < space_->size(); ++i) {
    if (space_->degree(i) > valid_order_) coeffs_[i] = 0.0;
  }
}

Jet Jet::derivative(int var) const {
  if (!space_) return Jet(0.0);
  Jet r(space_, valid_order_ - 1);
  for (const auto& t : space_->derivative_terms(var)) {
    r.coeffs_[t.target] += t.factor * coeffs_[t.source];
  }
  r.truncate();
  return r;
}

namespace {

const std::shared_ptr<const JetSpace>& common_space(const Jet& a, const Jet& b) {
  return a.space() ? a.space() : b.space();
}

}  // namespace

Jet operator+(const Jet& a, const Jet& b) {
  const auto& space = common_space(a, b);
  if (!space) return Jet(a.constant_ + b.constant_);
  Jet r(space, std::min(a.valid_order(), b.valid_order()));
  for (int i = 0; i < space->size(); ++i) r.coeffs_[i] = a.coeff(i) + b.coeff(i);
  r.truncate();
  return r;
}

Jet operator-(const Jet& a, const Jet& b) {
  const auto& space = common_space(a, b);
  if (!space) return Jet(a.constant_ - b.constant_);
  Jet r(space, std::min(a.valid_order(), b.valid_order()));
  for (int i = 0; i < space->size(); ++i) r.coeffs_[i] = a.coeff(i) - b.coeff(i);
  r.truncate();
  return r;
}

Jet operator-(const Jet& a) {
  if (!a.space_) return Jet(-a.constant_);
  Jet r(a.space_, a.valid_order_);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) r.coeffs_[i] = -a.coeffs_[i];
  return r;
}

Jet operator*(const Jet& a, const Jet& b) {
  if (!a.space_ && !b.space_) return Jet(a.constant_ * b.constant_);
  if (!a.space_ || !b.space_) {
    const Jet& s = a.space_ ? b : a;
    const Jet& j = a.space_ ? a : b;
    Jet r(j.space_, j.valid_order_);
    for (std::size_t i = 0; i < j.coeffs_.size(); ++i) r.coeffs_[i] = s.constant_ * j.coeffs_[i];
    return r;
  }
  Jet r(a.space_, std::min(a.valid_order_, b.valid_order_));
  for (const auto& t : a.space_->product_terms()) {
    r.coeffs_[t.out] += a.coeffs_[t.lhs] * b.coeffs_[t.rhs];
  }
  r.truncate();
  return r;
}

Jet Jet::reciprocal() const {
  const double b0 = value();
  if (b0 == 0.0) throw EvalError("division by zero");
  if (!space_) return Jet(1.0 / b0);
  // 1/b = (1/b0) * sum_k (-r)^k with r = b/b0 - 1 carrying no constant term.
  Jet r = *this * Jet(1.0 / b0);
  r.coeffs_[0] = 0.0;
  const Jet neg_r = -r;
  Jet term = Jet::constant(space_, 1.0);
  term.valid_order_ = valid_order_;
  Jet sum = term;
  for (int k = 1; k <= std::min(valid_order_, space_->order()); ++k) {
    term = term * neg_r;
    sum = sum + term;
  }
  return sum * Jet(1.0 / b0);
}

Jet operator/(const Jet& a, const Jet& b) {
  if (!b.space_) {
    if (b.constant_ == 0.0) throw EvalError("division by zero");
    return a * Jet(1.0 / b.constant_);
  }
  return a * b.reciprocal();
}

}  // namespace diffgram
