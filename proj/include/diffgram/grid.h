#pragma once

#include <string>
#include <vector>

#include "diffgram/vector_field.h"

namespace diffgram {

/// Axis-aligned box [lower_1, upper_1] x ... x [lower_n, upper_n].
struct Box {
  Vector lower;
  Vector upper;

  int dim() const { return static_cast<int>(lower.size()); }
  bool contains(const Vector& x) const;
};

/// Parses "lo1,hi1,lo2,hi2,...".
Box parse_box(const std::string& text);
/// Parses "21x21" (one count per dimension, each >= 1).
std::vector<int> parse_shape(const std::string& text);
/// Parses "0.1,0.1".
Vector parse_vector(const std::string& text);

/// Grid points covering the box inclusively at both ends. The first
/// coordinate varies slowest. A count of 1 places the point at the centre.
std::vector<Vector> grid_points(const Box& box, const std::vector<int>& shape);

/// %.17g formatting used by every CSV and JSON writer.
std::string format_double(double v);

}  // namespace diffgram
