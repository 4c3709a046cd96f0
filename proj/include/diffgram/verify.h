#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "diffgram/energy.h"
#include "diffgram/grid.h"
#include "diffgram/quadrature.h"
#include "diffgram/system_model.h"

namespace diffgram {

enum class Verdict { kPass, kFail, kInconclusive };

std::string verdict_name(Verdict v);

struct NamedVector {
  std::string name;
  Vector value;
};

struct CheckSample {
  std::vector<NamedVector> inputs;
  double lhs = 0.0;
  double rhs = 0.0;
  /// lhs - rhs
  double margin = 0.0;
  /// Sum of the error estimates of both sides.
  double budget = 0.0;
  Verdict verdict = Verdict::kInconclusive;
  std::string note;
};

/// |signal(t)| ~ c exp(-lambda t) forward, or c exp(lambda t) backward.
struct DecayEstimate {
  std::string label;
  double c = 0.0;
  double lambda = 0.0;
  double window_begin = 0.0;
  double window_end = 0.0;
  /// RMS error of the log-linear fit.
  double residual = 0.0;
  /// lambda is not positive: the signal does not decay.
  bool hypothesis_violated = false;
};

struct ItemResult {
  std::string name;
  Verdict verdict = Verdict::kInconclusive;
  std::string detail;
};

struct Implication {
  std::string statement;
  /// "witnessed", "violated", "undetermined" or "not_applicable".
  std::string status;
};

struct Report {
  std::string theorem;
  Verdict verdict = Verdict::kInconclusive;
  std::vector<CheckSample> samples;
  std::vector<DecayEstimate> decay_fits;
  std::vector<ItemResult> items;
  std::vector<Implication> implications;
  std::vector<std::string> notes;

  std::string to_json() const;
};

struct CheckOptions {
  ImproperOptions improper;
  int gl_order = 6;
  std::vector<double> ladder = default_ladder();
  double limit_tol = 1e-3;
  /// A sample whose error budget exceeds both |margin| and this value is
  /// inconclusive rather than pass.
  double decision_tol = 1e-6;
  /// Allowed |margin| (relative to max(1, |rhs|)) of equality assertions.
  double equality_tol = 1e-4;
  /// Horizon of the simulations used for decay fits.
  double decay_horizon = 20.0;
  int jobs = 1;
};

/// Sample verdict of lhs >= rhs.
Verdict inequality_verdict(double margin, double budget, double decision_tol);
/// Sample verdict of lhs == rhs.
Verdict equality_verdict(double margin, double budget, double tol);
/// fail if any sample fails, else inconclusive if any is, else pass.
Verdict combine(const std::vector<Verdict>& verdicts);

/**
 * Least-squares fit of log|signal| over the final half of the time span
 * (the earliest half for backward signals). Throws std::invalid_argument
 * for fewer than ten samples or a non-positive sample in the window.
 */
DecayEstimate fit_decay(const std::vector<double>& times, const std::vector<double>& values,
                        TimeDirection direction);
/// Fits the state norm of `signal`, resampled at `samples` points.
DecayEstimate fit_decay(const Trajectory& signal, TimeDirection direction, int samples = 50);

using PointPair = std::pair<Vector, Vector>;

/// int_0^1 E_dC(gamma(s), x0' - x0) ds >= E_iC(x0, x0') for each (x0, x0').
Report check_thm1(const SystemModel& sys, const std::vector<PointPair>& pairs,
                  const CheckOptions& options = {});

/// lim E_iC(x0, x0 + s dx0)/s^2 >= E_dC(x0, dx0) for each (x0, dx0); with a
/// Riccati certificate R the relation is asserted as an equality.
Report check_thm2(const SystemModel& sys, const std::vector<PointPair>& samples,
                  const std::optional<MatrixField>& riccati_certificate = std::nullopt,
                  const CheckOptions& options = {});

/// int_0^1 E_dO(gamma(s), x0' - x0) ds >= E_iO(x0, x0').
Report check_thm3(const SystemModel& sys, const std::vector<PointPair>& pairs,
                  const CheckOptions& options = {});

/// lim E_iO(x0 + s dx0, x0)/s^2 == E_dO(x0, dx0).
Report check_thm4(const SystemModel& sys, const std::vector<PointPair>& samples,
                  const CheckOptions& options = {});

struct RegionCheck {
  Box region;
  std::vector<int> grid = {11, 11};
  int samples = 10;
  std::uint64_t seed = 1;
  /// Bracket / Lie-derivative depth for the rank items (<= 0: 2n - 1).
  int depth = 0;
};

/// Items of the observability characterization on a region:
///   1) dx(t) -> 0 along zero-input flows (decay fits),
///   2) zero-state detectability via the observability rank on the grid,
///   3) Q positive definite on the grid and E_dO = 1/2 |dx0|^2_Q at samples;
/// and which of the implications (1,2 => 3), (2,3 => 1), (3,1 => 2) are
/// witnessed.
Report check_thm5(const SystemModel& sys, const MatrixField& Q, const RegionCheck& region,
                  const CheckOptions& options = {});

/// Dual counterpart: 1) dp(t) -> 0 along the dual closed loop, 2) the
/// closed-loop bracket rank is n on the grid, 3) P positive definite.
Report check_cor7(const SystemModel& sys, const MatrixField& P, const RegionCheck& region,
                  const CheckOptions& options = {});

/// Random pairs with both points uniform in `box`.
std::vector<PointPair> random_pairs(const Box& box, int count, std::uint64_t seed);
/// Random (x0, dx0) with x0 uniform in `box` and dx0 a unit vector (a
/// normalized uniform sample of [-1, 1]^n).
std::vector<PointPair> random_directions(const Box& box, int count, std::uint64_t seed);

}  // namespace diffgram
