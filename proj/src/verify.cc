#include "diffgram/verify.h"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "diffgram/errors.h"
#include "diffgram/gramian.h"
#include "diffgram/parallel.h"
#include "diffgram/random.h"
#include "diffgram/rank.h"
#include "diffgram/systems.h"

namespace diffgram {

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kPass: return "pass";
    case Verdict::kFail: return "fail";
    case Verdict::kInconclusive: return "inconclusive";
  }
  return "inconclusive";
}

Verdict inequality_verdict(double margin, double budget, double decision_tol) {
  if (!std::isfinite(margin) || !std::isfinite(budget)) return Verdict::kInconclusive;
  if (margin < -budget) return Verdict::kFail;
  if (budget > std::abs(margin) && budget > decision_tol) return Verdict::kInconclusive;
  return Verdict::kPass;
}

Verdict equality_verdict(double margin, double budget, double tol) {
  if (!std::isfinite(margin) || !std::isfinite(budget)) return Verdict::kInconclusive;
  return std::abs(margin) <= tol + budget ? Verdict::kPass : Verdict::kFail;
}

Verdict combine(const std::vector<Verdict>& verdicts) {
  bool inconclusive = false;
  for (Verdict v : verdicts) {
    if (v == Verdict::kFail) return Verdict::kFail;
    if (v == Verdict::kInconclusive) inconclusive = true;
  }
  return inconclusive ? Verdict::kInconclusive : Verdict::kPass;
}

DecayEstimate fit_decay(const std::vector<double>& times, const std::vector<double>& values,
                        TimeDirection direction) {
  if (times.size() != values.size() || times.empty()) {
    throw std::invalid_argument("decay fit needs matching, non-empty samples");
  }
  const double begin = times.front();
  const double end = times.back();
  const double mid = 0.5 * (begin + end);
  const bool forward = direction == TimeDirection::kForward;

  std::vector<double> ts, ys;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const bool in_window = forward ? times[i] >= mid : times[i] <= mid;
    if (!in_window) continue;
    if (!(values[i] > 0.0)) {
      throw std::invalid_argument("decay fit needs a positive signal");
    }
    ts.push_back(times[i]);
    ys.push_back(std::log(values[i]));
  }
  if (ts.size() < 10) throw std::invalid_argument("decay fit needs at least ten samples");

  const double n = static_cast<double>(ts.size());
  double st = 0, sy = 0, stt = 0, sty = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    st += ts[i];
    sy += ys[i];
    stt += ts[i] * ts[i];
    sty += ts[i] * ys[i];
  }
  const double slope = (n * sty - st * sy) / (n * stt - st * st);
  const double intercept = (sy - slope * st) / n;
  double sq = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double r = ys[i] - (intercept + slope * ts[i]);
    sq += r * r;
  }

  DecayEstimate d;
  d.c = std::exp(intercept);
  d.lambda = forward ? -slope : slope;
  d.window_begin = ts.front();
  d.window_end = ts.back();
  d.residual = std::sqrt(sq / n);
  d.hypothesis_violated = !(d.lambda > 1e-6);
  return d;
}

DecayEstimate fit_decay(const Trajectory& signal, TimeDirection direction, int samples) {
  std::vector<double> times, values;
  const double a = signal.start_time();
  const double b = signal.end_time();
  const int total = 2 * samples;
  for (int i = 0; i < total; ++i) {
    const double t = a + (b - a) * i / (total - 1);
    times.push_back(t);
    values.push_back(signal.at(t).norm());
  }
  return fit_decay(times, values, direction);
}

namespace {

using nlohmann::ordered_json;

ordered_json vector_json(const Vector& v) {
  ordered_json a = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

CheckSample make_sample(std::vector<NamedVector> inputs) {
  CheckSample s;
  s.inputs = std::move(inputs);
  return s;
}

// Runs `fill` for every sample slot; exceptions become inconclusive samples.
template <typename Fill>
void run_samples(std::vector<CheckSample>& samples, int jobs, Fill fill) {
  parallel_for(samples.size(), jobs, [&](std::size_t i) {
    try {
      fill(i, samples[i]);
    } catch (const std::exception& e) {
      samples[i].verdict = Verdict::kInconclusive;
      samples[i].note = e.what();
    }
  });
}

// Decay fit of |dx| for the hypothesis of a sample; returns nullopt when the
// tangent is zero (the hypothesis holds trivially).
std::optional<DecayEstimate> variational_decay(const AugmentedField& field, const Vector& x0,
                                               const Vector& dx0, TimeDirection direction,
                                               const CheckOptions& options) {
  if (dx0.norm() == 0.0) return std::nullopt;
  const int n = static_cast<int>(x0.size());
  const Vector y0 = field.stack({x0, dx0});
  const Trajectory traj =
      direction == TimeDirection::kForward
          ? integrate_ivp(field.rhs(), y0, 0.0, options.decay_horizon, options.improper.integrator)
          : integrate_backward(field.rhs(), y0, options.decay_horizon,
                               options.improper.integrator);
  DecayEstimate d = fit_decay(traj.slice(n, n), direction);
  d.c /= dx0.norm();
  return d;
}

void apply_decay(CheckSample& sample, const std::optional<DecayEstimate>& fit) {
  if (fit && fit->hypothesis_violated) {
    sample.verdict = Verdict::kInconclusive;
    sample.note = "decay hypothesis not witnessed (fitted lambda " + format_double(fit->lambda) +
                  ")";
  }
}

void finish(Report& report, const std::vector<std::optional<DecayEstimate>>& fits) {
  std::vector<Verdict> verdicts;
  for (const auto& s : report.samples) verdicts.push_back(s.verdict);
  report.verdict = report.samples.empty() ? Verdict::kInconclusive : combine(verdicts);
  for (std::size_t i = 0; i < fits.size(); ++i) {
    if (!fits[i]) continue;
    DecayEstimate d = *fits[i];
    d.label = "sample " + std::to_string(i);
    report.decay_fits.push_back(d);
  }
  report.notes.push_back(
      "decay constants are least-squares estimates on sampled trajectories, not certificates");
}

}  // namespace

std::string Report::to_json() const {
  ordered_json j;
  j["theorem"] = theorem;
  j["verdict"] = verdict_name(verdict);
  ordered_json ss = ordered_json::array();
  for (const auto& s : samples) {
    ordered_json o;
    ordered_json inputs = ordered_json::object();
    for (const auto& in : s.inputs) inputs[in.name] = vector_json(in.value);
    o["inputs"] = inputs;
    o["lhs"] = s.lhs;
    o["rhs"] = s.rhs;
    o["margin"] = s.margin;
    o["budget"] = s.budget;
    o["verdict"] = verdict_name(s.verdict);
    if (!s.note.empty()) o["note"] = s.note;
    ss.push_back(o);
  }
  j["samples"] = ss;
  ordered_json fits = ordered_json::array();
  for (const auto& d : decay_fits) {
    fits.push_back(ordered_json{{"label", d.label},
                                {"c", d.c},
                                {"lambda", d.lambda},
                                {"window", {d.window_begin, d.window_end}},
                                {"residual", d.residual},
                                {"hypothesis_violated", d.hypothesis_violated}});
  }
  j["decay_fits"] = fits;
  if (!items.empty()) {
    ordered_json it = ordered_json::array();
    for (const auto& item : items) {
      it.push_back(ordered_json{
          {"name", item.name}, {"verdict", verdict_name(item.verdict)}, {"detail", item.detail}});
    }
    j["items"] = it;
    ordered_json im = ordered_json::array();
    for (const auto& imp : implications) {
      im.push_back(ordered_json{{"statement", imp.statement}, {"status", imp.status}});
    }
    j["implications"] = im;
  }
  j["notes"] = notes;
  return j.dump(2);
}

std::vector<PointPair> random_pairs(const Box& box, int count, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<PointPair> out;
  for (int i = 0; i < count; ++i) {
    Vector a = rng.uniform_vector(box.lower, box.upper);
    Vector b = rng.uniform_vector(box.lower, box.upper);
    out.emplace_back(std::move(a), std::move(b));
  }
  return out;
}

std::vector<PointPair> random_directions(const Box& box, int count, std::uint64_t seed) {
  SplitMix64 rng(seed);
  const Vector ones = Vector::Ones(box.dim());
  std::vector<PointPair> out;
  for (int i = 0; i < count; ++i) {
    Vector x = rng.uniform_vector(box.lower, box.upper);
    Vector d;
    do {
      d = rng.uniform_vector(-ones, ones);
    } while (d.norm() < 1e-3);
    out.emplace_back(std::move(x), d / d.norm());
  }
  return out;
}

Report check_thm1(const SystemModel& sys, const std::vector<PointPair>& pairs,
                  const CheckOptions& options) {
  sys.k();
  Report report;
  report.theorem = "thm1";
  const AugmentedField closed = closed_loop_prolonged(sys);
  std::vector<std::optional<DecayEstimate>> fits(pairs.size());
  for (const auto& [a, b] : pairs) report.samples.push_back(make_sample({{"x0", a}, {"x0_prime", b}}));
  run_samples(report.samples, options.jobs, [&](std::size_t i, CheckSample& s) {
    const auto& [x0, x0p] = pairs[i];
    const EnergyValue lhs = path_energy_integral(
        [&](const Vector& x, const Vector& dx) {
          return diff_controllability_fb(sys, x, dx, options.improper);
        },
        LinePath::between(x0, x0p), options.gl_order);
    const EnergyValue rhs = incr_controllability_fb(sys, x0, x0p, options.improper);
    s.lhs = lhs.value;
    s.rhs = rhs.value;
    s.margin = lhs.value - rhs.value;
    s.budget = lhs.error_estimate + rhs.error_estimate;
    s.verdict = inequality_verdict(s.margin, s.budget, options.decision_tol);
    fits[i] = variational_decay(closed, x0, x0p - x0, TimeDirection::kBackward, options);
    apply_decay(s, fits[i]);
  });
  report.notes.push_back("lhs: path integral of E_dC over the segment; rhs: E_iC; claim lhs >= rhs");
  finish(report, fits);
  return report;
}

Report check_thm2(const SystemModel& sys, const std::vector<PointPair>& samples,
                  const std::optional<MatrixField>& riccati_certificate,
                  const CheckOptions& options) {
  sys.k();
  Report report;
  report.theorem = "thm2";
  const AugmentedField closed = closed_loop_prolonged(sys);
  const bool equality = riccati_certificate.has_value();
  std::vector<std::optional<DecayEstimate>> fits(samples.size());
  std::vector<double> certificate_residual(samples.size(), 0.0);
  for (const auto& [x, d] : samples) report.samples.push_back(make_sample({{"x0", x}, {"dx0", d}}));
  run_samples(report.samples, options.jobs, [&](std::size_t i, CheckSample& s) {
    const auto& [x0, dx0] = samples[i];
    const QuadraticLimit lhs = quadratic_limit(
        [&](const Vector& a, const Vector& b) {
          return incr_controllability_fb(sys, a, b, options.improper);
        },
        x0, dx0, options.ladder, options.limit_tol);
    const EnergyValue rhs = diff_controllability_fb(sys, x0, dx0, options.improper);
    s.lhs = lhs.value;
    s.rhs = rhs.value;
    s.margin = lhs.value - rhs.value;
    s.budget = lhs.error_estimate + rhs.error_estimate;
    if (equality) {
      const auto res = riccati_residual(sys, *riccati_certificate, x0);
      certificate_residual[i] = res.first.frobenius_norm + res.second.frobenius_norm;
      s.verdict = equality_verdict(s.margin, s.budget,
                                   options.equality_tol * std::max(1.0, std::abs(s.rhs)));
    } else {
      s.verdict = inequality_verdict(s.margin, s.budget, options.decision_tol);
    }
    fits[i] = variational_decay(closed, x0, dx0, TimeDirection::kBackward, options);
    apply_decay(s, fits[i]);
  });
  report.notes.push_back("lhs: Richardson limit of E_iC(x0, x0 + s dx0)/s^2; rhs: E_dC");
  if (equality) {
    double worst = 0.0;
    for (double r : certificate_residual) worst = std::max(worst, r);
    report.notes.push_back("Riccati certificate supplied: equality asserted; max certificate "
                           "residual at samples " + format_double(worst));
  } else {
    report.notes.push_back("no Riccati certificate: only lhs >= rhs is asserted, the gap is reported");
  }
  finish(report, fits);
  return report;
}

Report check_thm3(const SystemModel& sys, const std::vector<PointPair>& pairs,
                  const CheckOptions& options) {
  Report report;
  report.theorem = "thm3";
  const AugmentedField open = prolong(sys, zero_input(sys.m()), zero_variation(sys.m()));
  std::vector<std::optional<DecayEstimate>> fits(pairs.size());
  for (const auto& [a, b] : pairs) report.samples.push_back(make_sample({{"x0", a}, {"x0_prime", b}}));
  run_samples(report.samples, options.jobs, [&](std::size_t i, CheckSample& s) {
    const auto& [x0, x0p] = pairs[i];
    const EnergyValue lhs = path_energy_integral(
        [&](const Vector& x, const Vector& dx) {
          return diff_observability(sys, x, dx, options.improper);
        },
        LinePath::between(x0, x0p), options.gl_order);
    const EnergyValue rhs = incr_observability(sys, x0, x0p, options.improper);
    s.lhs = lhs.value;
    s.rhs = rhs.value;
    s.margin = lhs.value - rhs.value;
    s.budget = lhs.error_estimate + rhs.error_estimate;
    s.verdict = inequality_verdict(s.margin, s.budget, options.decision_tol);
    fits[i] = variational_decay(open, x0, x0p - x0, TimeDirection::kForward, options);
    apply_decay(s, fits[i]);
  });
  report.notes.push_back("lhs: path integral of E_dO over the segment; rhs: E_iO; claim lhs >= rhs");
  finish(report, fits);
  return report;
}

Report check_thm4(const SystemModel& sys, const std::vector<PointPair>& samples,
                  const CheckOptions& options) {
  Report report;
  report.theorem = "thm4";
  const AugmentedField open = prolong(sys, zero_input(sys.m()), zero_variation(sys.m()));
  std::vector<std::optional<DecayEstimate>> fits(samples.size());
  for (const auto& [x, d] : samples) report.samples.push_back(make_sample({{"x0", x}, {"dx0", d}}));
  run_samples(report.samples, options.jobs, [&](std::size_t i, CheckSample& s) {
    const auto& [x0, dx0] = samples[i];
    const QuadraticLimit lhs = quadratic_limit(
        [&](const Vector& a, const Vector& b) {
          return incr_observability(sys, b, a, options.improper);
        },
        x0, dx0, options.ladder, options.limit_tol);
    const EnergyValue rhs = diff_observability(sys, x0, dx0, options.improper);
    s.lhs = lhs.value;
    s.rhs = rhs.value;
    s.margin = lhs.value - rhs.value;
    s.budget = lhs.error_estimate + rhs.error_estimate;
    s.verdict = equality_verdict(s.margin, s.budget,
                                 options.equality_tol * std::max(1.0, std::abs(s.rhs)));
    fits[i] = variational_decay(open, x0, dx0, TimeDirection::kForward, options);
    apply_decay(s, fits[i]);
  });
  report.notes.push_back("lhs: Richardson limit of E_iO(x0 + s dx0, x0)/s^2; rhs: E_dO; claim equality");
  finish(report, fits);
  return report;
}

namespace {

// Item from per-sample decay fits of the second slice of `field`.
ItemResult decay_item(const std::string& name, const AugmentedField& field,
                      const std::vector<PointPair>& samples, const CheckOptions& options,
                      Report& report) {
  ItemResult item{name, Verdict::kPass, ""};
  std::vector<std::optional<DecayEstimate>> fits(samples.size());
  std::vector<std::string> errors(samples.size());
  parallel_for(samples.size(), options.jobs, [&](std::size_t i) {
    try {
      fits[i] = variational_decay(field, samples[i].first, samples[i].second,
                                  TimeDirection::kForward, options);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  int violated = 0, failed = 0;
  double min_lambda = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!errors[i].empty()) {
      ++failed;
      continue;
    }
    if (!fits[i]) continue;
    DecayEstimate d = *fits[i];
    d.label = name + ", sample " + std::to_string(i);
    report.decay_fits.push_back(d);
    min_lambda = std::min(min_lambda, d.lambda);
    if (d.hypothesis_violated) ++violated;
  }
  if (violated > 0) {
    item.verdict = Verdict::kFail;
  } else if (failed > 0 || samples.empty()) {
    item.verdict = Verdict::kInconclusive;
  }
  item.detail = std::to_string(samples.size()) + " simulations, " + std::to_string(violated) +
                " without decay, " + std::to_string(failed) + " failed; min fitted lambda " +
                format_double(min_lambda);
  return item;
}

ItemResult rank_item(const std::string& name, const RankFunction& fn, const SystemModel& sys,
                     const RegionCheck& region, int jobs) {
  const RankSweep sweep = rank_sweep(fn, region.region, region.grid, jobs);
  ItemResult item{name, Verdict::kPass, ""};
  int deficient = 0, failed = 0;
  std::string first;
  for (std::size_t i = 0; i < sweep.points.size(); ++i) {
    if (sweep.status[i] != "ok") {
      ++failed;
    } else if (sweep.rank[i] < sys.n()) {
      if (deficient++ == 0) {
        first = " (first at x = [" + format_double(sweep.points[i][0]);
        for (Eigen::Index k = 1; k < sweep.points[i].size(); ++k) {
          first += ", " + format_double(sweep.points[i][k]);
        }
        first += "])";
      }
    }
  }
  if (deficient > 0) {
    item.verdict = Verdict::kFail;
  } else if (failed > 0) {
    item.verdict = Verdict::kInconclusive;
  }
  item.detail = std::to_string(sweep.points.size()) + " grid points, " +
                std::to_string(deficient) + " rank deficient" + first + ", " +
                std::to_string(failed) + " failed";
  return item;
}

ItemResult pd_item(const std::string& name, const MatrixField& M, const RegionCheck& region,
                   int jobs) {
  const PDScan scan = pd_scan([&M](const Vector& x) { return M(x); }, region.region,
                              region.grid, jobs);
  ItemResult item{name, Verdict::kPass, ""};
  std::size_t failed = 0;
  double min_eig = std::numeric_limits<double>::infinity();
  double min_det = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < scan.points.size(); ++i) {
    if (scan.status[i] != "ok") {
      ++failed;
      continue;
    }
    min_eig = std::min(min_eig, scan.min_eig[i]);
    min_det = std::min(min_det, scan.det[i]);
  }
  const std::size_t indefinite = scan.points.size() - failed - scan.positive_count();
  if (indefinite > 0) {
    item.verdict = Verdict::kFail;
  } else if (failed > 0) {
    item.verdict = Verdict::kInconclusive;
  }
  item.detail = std::to_string(scan.points.size()) + " grid points, " +
                std::to_string(indefinite) + " not positive definite, " +
                std::to_string(failed) + " failed; min eigenvalue " + format_double(min_eig) +
                ", min determinant " + format_double(min_det);
  return item;
}

void apply_implications(Report& report) {
  const auto& it = report.items;
  const int triples[3][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
  bool violated = false, witnessed = false;
  for (const auto& t : triples) {
    Implication imp;
    imp.statement = "items " + std::to_string(t[0] + 1) + " and " + std::to_string(t[1] + 1) +
                    " imply item " + std::to_string(t[2] + 1);
    if (it[t[0]].verdict == Verdict::kPass && it[t[1]].verdict == Verdict::kPass) {
      switch (it[t[2]].verdict) {
        case Verdict::kPass: imp.status = "witnessed"; witnessed = true; break;
        case Verdict::kFail: imp.status = "violated"; violated = true; break;
        case Verdict::kInconclusive: imp.status = "undetermined"; break;
      }
    } else {
      imp.status = "not_applicable";
    }
    report.implications.push_back(imp);
  }
  report.verdict = violated ? Verdict::kFail
                            : (witnessed ? Verdict::kPass : Verdict::kInconclusive);
}

}  // namespace

Report check_thm5(const SystemModel& sys, const MatrixField& Q, const RegionCheck& region,
                  const CheckOptions& options) {
  Report report;
  report.theorem = "thm5";
  const int depth = region.depth > 0 ? region.depth : default_depth(sys);
  const std::vector<PointPair> samples =
      random_directions(region.region, region.samples, region.seed);

  const AugmentedField open = prolong(sys, zero_input(sys.m()), zero_variation(sys.m()));
  report.items.push_back(
      decay_item("variational convergence (dx(t) -> 0)", open, samples, options, report));
  report.items.push_back(rank_item(
      "zero-state detectability (observability rank n)",
      [&sys, depth](const Vector& x) { return obs_codistribution(sys, x, depth); }, sys, region,
      options.jobs));

  ItemResult pd = pd_item("Q positive definite and E_dO = 1/2 |dx0|^2_Q", Q, region, options.jobs);
  for (const auto& [x, d] : samples) report.samples.push_back(make_sample({{"x0", x}, {"dx0", d}}));
  std::vector<double> residual(samples.size(), 0.0);
  run_samples(report.samples, options.jobs, [&](std::size_t i, CheckSample& s) {
    const auto& [x0, dx0] = samples[i];
    const EnergyValue lhs = diff_observability(sys, x0, dx0, options.improper);
    s.lhs = lhs.value;
    s.rhs = 0.5 * dx0.dot(Q(x0) * dx0);
    s.margin = s.lhs - s.rhs;
    s.budget = lhs.error_estimate;
    s.verdict = equality_verdict(s.margin, s.budget,
                                 options.equality_tol * std::max(1.0, std::abs(s.rhs)));
    residual[i] = lyap_residual_obs(sys, Q, x0).frobenius_norm;
  });
  std::vector<Verdict> energy;
  for (const auto& s : report.samples) energy.push_back(s.verdict);
  if (pd.verdict == Verdict::kPass) pd.verdict = combine(energy);
  pd.detail += "; energy consistency at " + std::to_string(samples.size()) + " samples: " +
               verdict_name(combine(energy));
  report.items.push_back(pd);
  apply_implications(report);

  double worst = 0.0;
  for (double r : residual) worst = std::max(worst, r);
  const double allowed = Q.is_exact() ? 1e-6 : 1e-3;
  report.notes.push_back("max differential Lyapunov residual of Q at samples: " +
                         format_double(worst));
  if (worst > allowed && report.verdict == Verdict::kPass) {
    report.verdict = Verdict::kInconclusive;
    report.notes.push_back("Q does not solve the differential Lyapunov equation to " +
                           format_double(allowed) + "; implications not asserted");
  }
  report.notes.push_back("item 2 is checked through the observability rank at depth " +
                         std::to_string(depth) + " (rank at a finite depth bounds the full rank from below)");
  report.notes.push_back("Q is assumed to be the unique symmetric solution; uniqueness is not checked numerically");
  return report;
}

Report check_cor7(const SystemModel& sys, const MatrixField& P, const RegionCheck& region,
                  const CheckOptions& options) {
  sys.k();
  Report report;
  report.theorem = "cor7";
  const int depth = region.depth > 0 ? region.depth : default_depth(sys);
  const std::vector<PointPair> samples =
      random_directions(region.region, region.samples, region.seed);

  report.items.push_back(decay_item("dual convergence (dp(t) -> 0)", dual_closed_loop(sys),
                                    samples, options, report));
  report.items.push_back(rank_item(
      "dz = 0 implies dp0 = 0 (closed-loop bracket rank n)",
      [&sys, depth](const Vector& x) { return ctrl_bracket_matrix(sys, x, depth); }, sys, region,
      options.jobs));
  report.items.push_back(pd_item("P positive definite", P, region, options.jobs));
  apply_implications(report);

  double worst = 0.0;
  for (const auto& [x0, dp0] : samples) {
    const auto res = lyap_residual_ctrl(sys, P, x0);
    worst = std::max({worst, res.first.frobenius_norm, res.second.frobenius_norm});
  }
  const double allowed = P.is_exact() ? 1e-6 : 1e-3;
  report.notes.push_back("max differential Lyapunov residual of (P, k) at samples: " +
                         format_double(worst));
  if (worst > allowed && report.verdict == Verdict::kPass) {
    report.verdict = Verdict::kInconclusive;
    report.notes.push_back("(P, k) does not solve the differential Lyapunov equations to " +
                           format_double(allowed) + "; implications not asserted");
  }
  report.notes.push_back("item 2 is checked through the closed-loop bracket rank at depth " +
                         std::to_string(depth));
  return report;
}

}  // namespace diffgram
