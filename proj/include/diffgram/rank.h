#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "diffgram/grid.h"
#include "diffgram/system_model.h"

namespace diffgram {

struct RankMatrix {
  Matrix matrix;
  /// Descending, non-negative.
  Vector singular_values;
  int rank = 0;
  /// Relative tolerance: rank counts sigma_i > tol_used * sigma_max.
  double tol_used = 1e-8;
};

/// Numeric rank via one-sided Jacobi singular values.
RankMatrix make_rank_matrix(Matrix M, double rel_tol = 1e-8);

/// Depth used when a caller passes depth <= 0: 2n - 1.
int default_depth(const SystemModel& sys);

/// Columns [g_1..g_m, ad g_1..ad g_m, ..., ad^depth g_m] of the closed-loop
/// bracket (frozen-u Jacobian). The result certifies rank >= the reported
/// value for the full infinite sequence.
RankMatrix ctrl_bracket_matrix(const SystemModel& sys, const Vector& x, int depth = 0);

/// Columns [g, ad_f g, ..., ad_f^depth g] of the standard Lie bracket.
RankMatrix strong_access_matrix(const SystemModel& sys, const Vector& x, int depth = 0);

/// Rows d(L_f^i h_j)/dx for i = 0..depth.
RankMatrix obs_codistribution(const SystemModel& sys, const Vector& x, int depth = 0);

struct RankSweep {
  Box region;
  std::vector<int> shape;
  std::vector<Vector> points;
  std::vector<int> rank;
  std::vector<double> sigma_min;
  std::vector<double> sigma_max;
  std::vector<std::string> status;

  /// Columns x1..xn, rank, sigma_min, sigma_max, sigma_ratio, status.
  void write_csv(std::ostream& out) const;
};

using RankFunction = std::function<RankMatrix(const Vector&)>;

RankSweep rank_sweep(const RankFunction& fn, const Box& region, const std::vector<int>& shape,
                     int jobs = 1);

}  // namespace diffgram
