#include "diffgram/grid.h"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "diffgram/errors.h"

namespace diffgram {
namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) parts.push_back(item);
  if (!text.empty() && text.back() == sep) parts.push_back("");
  return parts;
}

double parse_number(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used]))) ++used;
  if (used != s.size()) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

}  // namespace

bool Box::contains(const Vector& x) const {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] < lower[i] || x[i] > upper[i]) return false;
  }
  return true;
}

Vector parse_vector(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.empty()) throw std::invalid_argument("empty vector");
  Vector v(static_cast<Eigen::Index>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) v[static_cast<Eigen::Index>(i)] = parse_number(parts[i]);
  return v;
}

Box parse_box(const std::string& text) {
  const Vector v = parse_vector(text);
  if (v.size() % 2 != 0) throw std::invalid_argument("box needs lo,hi pairs: '" + text + "'");
  Box box{Vector(v.size() / 2), Vector(v.size() / 2)};
  for (Eigen::Index i = 0; i < box.lower.size(); ++i) {
    box.lower[i] = v[2 * i];
    box.upper[i] = v[2 * i + 1];
    if (box.lower[i] > box.upper[i]) throw std::invalid_argument("box bounds reversed in '" + text + "'");
  }
  return box;
}

std::vector<int> parse_shape(const std::string& text) {
  std::vector<int> shape;
  for (const auto& part : split(text, 'x')) {
    const double v = parse_number(part);
    if (v < 1 || v != std::floor(v)) throw std::invalid_argument("bad grid shape '" + text + "'");
    shape.push_back(static_cast<int>(v));
  }
  return shape;
}

std::vector<Vector> grid_points(const Box& box, const std::vector<int>& shape) {
  const int n = box.dim();
  if (static_cast<int>(shape.size()) != n) {
    throw std::invalid_argument("grid shape has " + std::to_string(shape.size()) +
                                " entries for a " + std::to_string(n) + "-dimensional box");
  }
  std::size_t total = 1;
  for (int c : shape) total *= static_cast<std::size_t>(c);
  std::vector<Vector> points;
  points.reserve(total);
  std::vector<int> idx(n, 0);
  for (std::size_t k = 0; k < total; ++k) {
    Vector x(n);
    for (int i = 0; i < n; ++i) {
      if (shape[i] == 1) {
        x[i] = 0.5 * (box.lower[i] + box.upper[i]);
      } else if (idx[i] == shape[i] - 1) {
        x[i] = box.upper[i];
      } else {
        x[i] = box.lower[i] + (box.upper[i] - box.lower[i]) * idx[i] / (shape[i] - 1);
      }
    }
    points.push_back(x);
    for (int i = n - 1; i >= 0; --i) {
      if (++idx[i] < shape[i]) break;
      idx[i] = 0;
    }
  }
  return points;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace diffgram
