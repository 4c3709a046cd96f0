#include "diffgram/rank.h"

#include <limits>

#include "diffgram/calculus.h"
#include "diffgram/errors.h"
#include "diffgram/linalg.h"
#include "diffgram/parallel.h"

namespace diffgram {

RankMatrix make_rank_matrix(Matrix M, double rel_tol) {
  RankMatrix r;
  r.tol_used = rel_tol;
  r.singular_values = M.size() == 0 ? Vector() : jacobi_singular_values(M);
  r.matrix = std::move(M);
  const double smax = r.singular_values.size() > 0 ? r.singular_values[0] : 0.0;
  r.rank = 0;
  if (smax > 0.0) {
    for (Eigen::Index i = 0; i < r.singular_values.size(); ++i) {
      if (r.singular_values[i] > rel_tol * smax) ++r.rank;
    }
  }
  return r;
}

int default_depth(const SystemModel& sys) { return 2 * sys.n() - 1; }

namespace {

RankMatrix bracket_matrix(const SystemModel& sys, const Vector& x, int depth, bool closed_loop) {
  if (depth <= 0) depth = default_depth(sys);
  const int n = sys.n();
  const int m = sys.m();
  Matrix M(n, m * (depth + 1));
  for (int j = 0; j < m; ++j) {
    const VectorField column = sys.input_column(j);
    const std::vector<Vector> seq =
        closed_loop ? closed_loop_bracket_sequence(sys, column, x, depth)
                    : standard_bracket_sequence(sys.f(), column, x, depth);
    for (int i = 0; i <= depth; ++i) M.col(i * m + j) = seq[i];
  }
  return make_rank_matrix(std::move(M));
}

}  // namespace

RankMatrix ctrl_bracket_matrix(const SystemModel& sys, const Vector& x, int depth) {
  return bracket_matrix(sys, x, depth, true);
}

RankMatrix strong_access_matrix(const SystemModel& sys, const Vector& x, int depth) {
  return bracket_matrix(sys, x, depth, false);
}

RankMatrix obs_codistribution(const SystemModel& sys, const Vector& x, int depth) {
  if (depth <= 0) depth = default_depth(sys);
  return make_rank_matrix(lie_derivative_gradients(sys.f(), sys.h(), x, depth));
}

void RankSweep::write_csv(std::ostream& out) const {
  const int n = region.dim();
  for (int i = 0; i < n; ++i) out << 'x' << (i + 1) << ',';
  out << "rank,sigma_min,sigma_max,sigma_ratio,status\n";
  for (std::size_t k = 0; k < points.size(); ++k) {
    for (int i = 0; i < n; ++i) out << format_double(points[k][i]) << ',';
    const double ratio = sigma_max[k] > 0 ? sigma_min[k] / sigma_max[k] : 0.0;
    out << rank[k] << ',' << format_double(sigma_min[k]) << ',' << format_double(sigma_max[k])
        << ',' << format_double(ratio) << ',';
    std::string s = status[k];
    for (char& c : s) {
      if (c == ',' || c == '\n') c = ';';
    }
    out << s << '\n';
  }
}

RankSweep rank_sweep(const RankFunction& fn, const Box& region, const std::vector<int>& shape,
                     int jobs) {
  RankSweep sweep;
  sweep.region = region;
  sweep.shape = shape;
  sweep.points = grid_points(region, shape);
  const std::size_t count = sweep.points.size();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  sweep.rank.assign(count, -1);
  sweep.sigma_min.assign(count, nan);
  sweep.sigma_max.assign(count, nan);
  sweep.status.assign(count, "ok");
  parallel_for(count, jobs, [&](std::size_t i) {
    try {
      const RankMatrix r = fn(sweep.points[i]);
      sweep.rank[i] = r.rank;
      const Vector& s = r.singular_values;
      // sigma_min is the smallest of the first n singular values (the ones
      // that decide full rank).
      const Eigen::Index n = std::min<Eigen::Index>(s.size(), r.matrix.rows());
      sweep.sigma_max[i] = s.size() > 0 ? s[0] : 0.0;
      sweep.sigma_min[i] = n > 0 ? s[n - 1] : 0.0;
    } catch (const std::exception& e) {
      sweep.status[i] = std::string("error: ") + e.what();
    }
  });
  return sweep;
}

}  // namespace diffgram
