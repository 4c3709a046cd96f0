#pragma once

#include <cstdint>

#include "diffgram/vector_field.h"

namespace diffgram {

/// SplitMix64: state += 0x9e3779b97f4a7c15, then two xor-shift-multiply
/// rounds. Doubles take the top 53 bits.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  Vector uniform_vector(const Vector& lower, const Vector& upper) {
    Vector v(lower.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = uniform(lower[i], upper[i]);
    return v;
  }

 private:
  std::uint64_t state_;
};

}  // namespace diffgram
