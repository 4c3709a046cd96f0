#pragma once

#include <algorithm>
#include <array>
#include <concepts>

#include "diffgram/errors.h"

namespace diffgram {

/// Primal (real) part of a plain scalar.
inline double primal(double v) { return v; }

/// Maximum number of tangent directions carried by a Dual.
inline constexpr int kMaxTangents = 16;

/**
 * Forward-mode dual number with up to kMaxTangents simultaneous tangent
 * directions. Nesting (`Dual<Dual<double>>`) yields exact second
 * derivatives.
 *
 * A dual whose tangent count is zero is a constant; binary operations
 * broadcast it against duals of any width.
 */
template <typename T>
class Dual {
 public:
  Dual() = default;
  Dual(double c) : value_(c) {}  // NOLINT: constants convert implicitly
  template <typename U = T>
    requires(!std::same_as<U, double>)
  Dual(const T& value) : value_(value) {}  // NOLINT

  /// Seeds the i-th independent variable among `size` directions.
  static Dual variable(const T& value, int index, int size) {
    check_size(size);
    Dual d(value, size);
    d.tangents_[index] = T(1.0);
    return d;
  }

  /// A value with `size` explicitly zero tangents.
  Dual(const T& value, int size) : value_(value), size_(size) {
    check_size(size);
  }

  const T& value() const { return value_; }
  T& value() { return value_; }
  int size() const { return size_; }

  T tangent(int i) const { return i < size_ ? tangents_[i] : T(0.0); }

  void set_tangent(int i, const T& t) {
    if (i >= size_) {
      check_size(i + 1);
      for (int j = size_; j <= i; ++j) tangents_[j] = T(0.0);
      size_ = i + 1;
    }
    tangents_[i] = t;
  }

  friend Dual operator+(const Dual& a, const Dual& b) {
    Dual r(a.value_ + b.value_, std::max(a.size_, b.size_));
    for (int i = 0; i < r.size_; ++i) r.tangents_[i] = a.tangent(i) + b.tangent(i);
    return r;
  }

  friend Dual operator-(const Dual& a, const Dual& b) {
    Dual r(a.value_ - b.value_, std::max(a.size_, b.size_));
    for (int i = 0; i < r.size_; ++i) r.tangents_[i] = a.tangent(i) - b.tangent(i);
    return r;
  }

  friend Dual operator-(const Dual& a) {
    Dual r(-a.value_, a.size_);
    for (int i = 0; i < r.size_; ++i) r.tangents_[i] = -a.tangents_[i];
    return r;
  }

  friend Dual operator*(const Dual& a, const Dual& b) {
    Dual r(a.value_ * b.value_, std::max(a.size_, b.size_));
    for (int i = 0; i < r.size_; ++i) {
      r.tangents_[i] = a.value_ * b.tangent(i) + b.value_ * a.tangent(i);
    }
    return r;
  }

  friend Dual operator/(const Dual& a, const Dual& b) {
    const T q = a.value_ / b.value_;
    Dual r(q, std::max(a.size_, b.size_));
    for (int i = 0; i < r.size_; ++i) {
      r.tangents_[i] = (a.tangent(i) - q * b.tangent(i)) / b.value_;
    }
    return r;
  }

  Dual& operator+=(const Dual& o) { return *this = *this + o; }
  Dual& operator-=(const Dual& o) { return *this = *this - o; }
  Dual& operator*=(const Dual& o) { return *this = *this * o; }

 private:
  static void check_size(int size) {
    if (size > kMaxTangents) {
      throw ModelError("dual number supports at most " +
                       std::to_string(kMaxTangents) + " directions");
    }
  }

  T value_{0.0};
  std::array<T, kMaxTangents> tangents_{};
  int size_ = 0;
};

template <typename T>
double primal(const Dual<T>& d) {
  return primal(d.value());
}

using DualD = Dual<double>;
using DualDD = Dual<Dual<double>>;

}  // namespace diffgram
