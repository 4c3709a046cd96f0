#include "diffgram/cli.h"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <Eigen/LU>
#include <json.hpp>

#include "diffgram/calculus.h"
#include "diffgram/energy.h"
#include "diffgram/errors.h"
#include "diffgram/gramian.h"
#include "diffgram/grid.h"
#include "diffgram/linalg.h"
#include "diffgram/parallel.h"
#include "diffgram/rank.h"
#include "diffgram/registry.h"
#include "diffgram/systems.h"
#include "diffgram/verify.h"

namespace diffgram::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

// Bad option values discovered after parsing; reported like parse errors.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string system;
  std::string out_dir = ".";
  int jobs = 1;
  double tol = 1e-8;
  std::uint64_t seed = 1;

  std::string mode = "prolonged";
  std::string x0, dx0, dp0, x0p, x;
  double tf = 10.0;
  bool backward = false;
  int samples = 201;
  bool plot = false;

  std::string kind;
  std::string region, grid;
  int depth = 0;
  std::string field;
  std::string equation;
  std::string theorem;
  int check_samples = 10;
  bool no_certificate = false;
};

const std::map<std::string, std::vector<std::string>>& examples() {
  static const std::map<std::string, std::vector<std::string>> table = {
      {"simulate",
       {"simulate --system paper_sec5 --mode dual-closed-loop --x0 0.1,0.1 --dp0 1,0 --tf 10",
        "simulate --system paper_sec5 --mode prolonged --x0 0.1,0.1 --dx0 1,0 --tf 10 --plot",
        "simulate --system linear_scalar --mode closed-loop --x0 1 --tf 1 --backward"}},
      {"energy",
       {"energy --system linear_scalar --kind dO --x0 0 --dx0 1",
        "energy --system paper_sec5 --kind iC --x0 0,0 --x0p 0.05,0 --tol 1e-9"}},
      {"gramian", {"gramian --system paper_sec5 --kind obs --x 0.1,-0.1",
                   "gramian --system linear_2x2 --kind ctrl --x 0,0"}},
      {"residual",
       {"residual --system paper_sec5 --equation dLya_con --field P --region=-0.5,0.5,-0.5,0.5 "
        "--grid 5x5",
        "residual --system data/example.json --equation dRicc --field R --region=-0.5,0.5,-0.5,0.5 "
        "--grid 5x5"}},
      {"rank",
       {"rank --system paper_sec5 --kind obs --depth 1 --region=-1,1,-1,1 --grid 21x21",
        "rank --system paper_sec5 --kind ctrl --depth 2 --x 0,0"}},
      {"pd-scan",
       {"pd-scan --system paper_sec5 --field empirical-Q --region=-0.3,0.3,-0.3,0.3 --grid 21x21",
        "pd-scan --system paper_sec5 --field P --region=-1,1,-1,1 --grid 5x5 --plot"}},
      {"verify",
       {"verify --system paper_sec5 --theorem cor7 --region=-0.5,0.5,-0.5,0.5",
        "verify --system paper_sec5 --theorem thm1 --samples 10 --seed 7 --jobs 2"}},
      {"example", {"example --out sec5", "example --out sec5 --grid 11x11 --jobs 2"}},
  };
  return table;
}

std::string footer_for(const std::string& name) {
  std::string text = "Examples:\n";
  for (const auto& e : examples().at(name)) text += "  diffgram " + e + "\n";
  return text;
}

void add_common(CLI::App* sub, Config& cfg, bool needs_system = true) {
  auto* opt = sub->add_option("--system", cfg.system,
                              "registry name (paper_sec5, linear_scalar, linear_2x2) or JSON spec path");
  if (needs_system) opt->required();
  sub->add_option("--out", cfg.out_dir, "output directory (created if absent)");
  sub->add_option("--jobs", cfg.jobs, "worker threads for grid scans and sample checks")
      ->check(CLI::PositiveNumber);
  sub->add_option("--tol", cfg.tol, "improper-integral tolerance")->check(CLI::PositiveNumber);
}

void build(CLI::App& app, Config& cfg) {
  app.require_subcommand(1);

  auto* sim = app.add_subcommand("simulate", "integrate a derived system and write trajectory.csv");
  add_common(sim, cfg);
  sim->add_option("--mode", cfg.mode, "system to integrate")
      ->check(CLI::IsMember({"open", "closed-loop", "prolonged", "closed-loop-prolonged",
                             "dual-closed-loop", "dual-open", "two-copy"}));
  sim->add_option("--x0", cfg.x0, "initial state, comma separated")->required();
  sim->add_option("--dx0", cfg.dx0, "initial variation (prolonged modes)");
  sim->add_option("--dp0", cfg.dp0, "initial costate variation (dual modes)");
  sim->add_option("--x0p", cfg.x0p, "initial state of the second copy (two-copy)");
  sim->add_option("--tf", cfg.tf, "duration")->check(CLI::PositiveNumber);
  sim->add_flag("--backward", cfg.backward, "integrate over [-tf, 0] instead of [0, tf]");
  sim->add_option("--samples", cfg.samples, "equally spaced output rows")
      ->check(CLI::Range(2, 1000000));
  sim->add_flag("--plot", cfg.plot, "also write a gnuplot script");
  sim->footer(footer_for("simulate"));

  auto* en = app.add_subcommand("energy", "evaluate one energy function, write energy.json");
  add_common(en, cfg);
  en->add_option("--kind", cfg.kind, "dO, iO, dC or iC")
      ->required()
      ->check(CLI::IsMember({"dO", "iO", "dC", "iC"}));
  en->add_option("--x0", cfg.x0, "state")->required();
  en->add_option("--dx0", cfg.dx0, "tangent (differential kinds)");
  en->add_option("--x0p", cfg.x0p, "second state (incremental kinds)");
  en->footer(footer_for("energy"));

  auto* gr = app.add_subcommand("gramian", "empirical differential Gramian, write gramian.json");
  add_common(gr, cfg);
  gr->add_option("--kind", cfg.kind, "obs (Q) or ctrl (R)")
      ->required()
      ->check(CLI::IsMember({"obs", "ctrl"}));
  gr->add_option("--x", cfg.x, "evaluation point")->required();
  gr->footer(footer_for("gramian"));

  auto* re = app.add_subcommand("residual", "matrix-equation residuals on a grid, write residual.csv");
  add_common(re, cfg);
  re->add_option("--equation", cfg.equation, "dLya_ob, dRicc, dLya_con or dLya_open")
      ->required()
      ->check(CLI::IsMember({"dLya_ob", "dRicc", "dLya_con", "dLya_open"}));
  re->add_option("--field", cfg.field,
                 "P, Q, R (certificates) or empirical-Q, empirical-R, empirical-P");
  re->add_option("--region", cfg.region, "box lo1,hi1,lo2,hi2,...")->required();
  re->add_option("--grid", cfg.grid, "grid shape, e.g. 5x5")->required();
  re->footer(footer_for("residual"));

  auto* rk = app.add_subcommand("rank", "rank conditions at a point or over a grid");
  add_common(rk, cfg);
  rk->add_option("--kind", cfg.kind, "ctrl (closed-loop brackets), access (Lie brackets) or obs")
      ->required()
      ->check(CLI::IsMember({"ctrl", "access", "obs"}));
  rk->add_option("--depth", cfg.depth, "bracket / Lie-derivative depth (default 2n-1)");
  rk->add_option("--x", cfg.x, "single evaluation point (writes rank.json)");
  rk->add_option("--region", cfg.region, "box for a sweep (writes rank.csv)");
  rk->add_option("--grid", cfg.grid, "grid shape for a sweep");
  rk->add_flag("--plot", cfg.plot, "also write a gnuplot script (sweeps)");
  rk->footer(footer_for("rank"));

  auto* pd = app.add_subcommand("pd-scan", "min eigenvalue and determinant on a grid, write scan.csv");
  add_common(pd, cfg);
  pd->add_option("--field", cfg.field, "empirical-Q (default), empirical-R, empirical-P, P, Q or R");
  pd->add_option("--region", cfg.region, "box lo1,hi1,lo2,hi2,...")->required();
  pd->add_option("--grid", cfg.grid, "grid shape, e.g. 21x21")->required();
  pd->add_flag("--plot", cfg.plot, "also write a gnuplot heatmap script");
  pd->footer(footer_for("pd-scan"));

  auto* ve = app.add_subcommand("verify", "check one theorem on samples, write report.json");
  add_common(ve, cfg);
  ve->add_option("--theorem", cfg.theorem, "thm1, thm2, thm3, thm4, thm5 or cor7")
      ->required()
      ->check(CLI::IsMember({"thm1", "thm2", "thm3", "thm4", "thm5", "cor7"}));
  ve->add_option("--region", cfg.region, "sampling box (default depends on the theorem)");
  ve->add_option("--grid", cfg.grid, "grid shape for region items (thm5, cor7)");
  ve->add_option("--samples", cfg.check_samples, "number of random samples")
      ->check(CLI::Range(1, 100000));
  ve->add_option("--seed", cfg.seed, "seed of the SplitMix64 sample generator");
  ve->add_option("--depth", cfg.depth, "rank depth for thm5 / cor7 (default 2n-1)");
  ve->add_option("--field", cfg.field, "matrix field for thm5 (Q) or cor7 (P)");
  ve->add_flag("--no-certificate", cfg.no_certificate,
               "thm2: ignore a registered Riccati certificate");
  ve->footer(footer_for("verify"));

  auto* ex = app.add_subcommand("example", "reproduce the built-in example end to end");
  add_common(ex, cfg, false);
  ex->add_option("--grid", cfg.grid, "grid of the Gramian determinant scan (default 21x21)");
  ex->footer(footer_for("example"));
}

// ---------------------------------------------------------------------------

Vector vector_arg(const std::string& text, int n, const std::string& name) {
  if (text.empty()) throw UsageError("--" + name + " is required for this command");
  Vector v;
  try {
    v = parse_vector(text);
  } catch (const std::exception& e) {
    throw UsageError("--" + name + ": " + e.what());
  }
  if (v.size() != n) {
    throw UsageError("--" + name + " needs " + std::to_string(n) + " components, got " +
                     std::to_string(v.size()));
  }
  return v;
}

Box box_arg(const std::string& text, int n, double default_half_width) {
  if (text.empty()) return Box{Vector::Constant(n, -default_half_width),
                               Vector::Constant(n, default_half_width)};
  Box box;
  try {
    box = parse_box(text);
  } catch (const std::exception& e) {
    throw UsageError(std::string("--region: ") + e.what());
  }
  if (box.dim() != n) throw UsageError("--region needs " + std::to_string(2 * n) + " numbers");
  return box;
}

std::vector<int> shape_arg(const std::string& text, int n, int default_count) {
  if (text.empty()) return std::vector<int>(n, default_count);
  std::vector<int> shape;
  try {
    shape = parse_shape(text);
  } catch (const std::exception& e) {
    throw UsageError(std::string("--grid: ") + e.what());
  }
  if (static_cast<int>(shape.size()) != n) {
    throw UsageError("--grid needs " + std::to_string(n) + " counts");
  }
  return shape;
}

ordered_json vector_json(const Vector& v) {
  ordered_json a = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

ordered_json matrix_json(const Matrix& M) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index r = 0; r < M.rows(); ++r) rows.push_back(vector_json(M.row(r).transpose()));
  return rows;
}

fs::path prepare_out(const Config& cfg) {
  fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << text;
}

ImproperOptions improper(const Config& cfg) { return ImproperOptions::with_tolerance(cfg.tol); }

MatrixField resolve_field(const RegisteredSystem& rs, const std::string& name,
                          const ImproperOptions& opts) {
  const SystemModel& sys = rs.model;
  if (name == "empirical-Q") return empirical_obs_field(sys, opts);
  if (name == "empirical-R") return empirical_ctrl_field(sys, opts);
  if (name == "empirical-P") {
    const MatrixField R = empirical_ctrl_field(sys, opts);
    return MatrixField::pointwise(sys.n(), sys.n(), sys.n(),
                                  [R](const Vector& x) { return Matrix(R(x).inverse()); });
  }
  if (name == "P" || name == "Q" || name == "R") return rs.certificate(name);
  throw UsageError("unknown field '" + name + "'");
}

// --------------------------------------------------------------------------- simulate

struct ModeSetup {
  AugmentedField field;
  std::vector<std::string> inputs;  // option names per slice
};

ModeSetup mode_setup(const RegisteredSystem& rs, const std::string& mode) {
  const SystemModel& sys = rs.model;
  const int n = sys.n();
  if (mode == "open") {
    return {AugmentedField(n, autonomous(sys.f()), {Slice{"x", 0, n}}), {"x0"}};
  }
  if (mode == "closed-loop") {
    return {AugmentedField(n, autonomous(sys.closed_loop_field()), {Slice{"x", 0, n}}), {"x0"}};
  }
  if (mode == "prolonged") {
    return {prolong(sys, zero_input(sys.m()), zero_variation(sys.m())), {"x0", "dx0"}};
  }
  if (mode == "closed-loop-prolonged") return {closed_loop_prolonged(sys), {"x0", "dx0"}};
  if (mode == "dual-closed-loop") return {dual_closed_loop(sys), {"x0", "dp0"}};
  if (mode == "dual-open") return {dual_open(sys), {"x0", "dp0"}};
  return {two_copy(sys, zero_input(sys.m()), zero_input(sys.m())), {"x0", "x0p"}};
}

fs::path write_trajectory(const fs::path& path, const AugmentedField& field, const Vector& y0,
                          double tf, bool backward, int samples, const IntegratorOptions& opts) {
  std::vector<double> times;
  for (int i = 0; i < samples; ++i) {
    const double t = tf * i / (samples - 1);
    times.push_back(backward ? t - tf : t);
  }
  IntegratorOptions o = opts;
  o.tstops = times;
  const Trajectory traj = backward ? integrate_backward(field.rhs(), y0, tf, o)
                                   : integrate_ivp(field.rhs(), y0, 0.0, tf, o);
  std::ostringstream csv;
  csv << 't';
  for (const Slice& s : field.layout()) {
    for (int i = 0; i < s.size; ++i) csv << ',' << s.name << (i + 1);
  }
  const bool has_second = field.layout().size() > 1;
  if (has_second) csv << ",norm_" << field.layout()[1].name;
  csv << '\n';
  for (double t : times) {
    const Vector y = traj.at(t);
    csv << format_double(t);
    for (Eigen::Index i = 0; i < y.size(); ++i) csv << ',' << format_double(y[i]);
    if (has_second) csv << ',' << format_double(field.part(field.layout()[1].name, y).norm());
    csv << '\n';
  }
  write_text(path, csv.str());
  return path;
}

int cmd_simulate(const Config& cfg, std::ostream& out) {
  const RegisteredSystem rs = load_system(cfg.system);
  const int n = rs.model.n();
  const ModeSetup setup = mode_setup(rs, cfg.mode);
  const std::map<std::string, const std::string*> values = {
      {"x0", &cfg.x0}, {"dx0", &cfg.dx0}, {"dp0", &cfg.dp0}, {"x0p", &cfg.x0p}};
  std::vector<Vector> parts;
  for (const auto& name : setup.inputs) parts.push_back(vector_arg(*values.at(name), n, name));
  const fs::path dir = prepare_out(cfg);
  const fs::path csv =
      write_trajectory(dir / "trajectory.csv", setup.field, setup.field.stack(parts), cfg.tf,
                       cfg.backward, cfg.samples, improper(cfg).integrator);
  out << "wrote " << csv.string() << '\n';
  if (cfg.plot) out << "wrote " << emit_plot_script(csv, "timeseries").string() << '\n';
  return 0;
}

// --------------------------------------------------------------------------- energy / gramian

int cmd_energy(const Config& cfg, std::ostream& out) {
  const RegisteredSystem rs = load_system(cfg.system);
  const SystemModel& sys = rs.model;
  const int n = sys.n();
  const Vector x0 = vector_arg(cfg.x0, n, "x0");
  const ImproperOptions opts = improper(cfg);
  const bool differential = cfg.kind == "dO" || cfg.kind == "dC";
  const Vector other = differential ? vector_arg(cfg.dx0, n, "dx0") : vector_arg(cfg.x0p, n, "x0p");
  EnergyValue e;
  if (cfg.kind == "dO") e = diff_observability(sys, x0, other, opts);
  if (cfg.kind == "iO") e = incr_observability(sys, x0, other, opts);
  if (cfg.kind == "dC") e = diff_controllability_fb(sys, x0, other, opts);
  if (cfg.kind == "iC") e = incr_controllability_fb(sys, x0, other, opts);

  ordered_json j;
  j["system"] = rs.name;
  j["definition"] = e.definition;
  j["x0"] = vector_json(x0);
  j[differential ? "dx0" : "x0_prime"] = vector_json(other);
  j["value"] = e.value;
  j["error_estimate"] = e.error_estimate;
  j["horizon"] = e.horizon;
  const fs::path path = prepare_out(cfg) / "energy.json";
  write_text(path, j.dump(2) + "\n");
  out << e.definition << " = " << format_double(e.value) << " (error estimate "
      << format_double(e.error_estimate) << ")\nwrote " << path.string() << '\n';
  return 0;
}

int cmd_gramian(const Config& cfg, std::ostream& out) {
  const RegisteredSystem rs = load_system(cfg.system);
  const Vector x = vector_arg(cfg.x, rs.model.n(), "x");
  const GramianResult g = cfg.kind == "obs" ? empirical_obs_gramian(rs.model, x, improper(cfg))
                                            : empirical_ctrl_gramian(rs.model, x, improper(cfg));
  ordered_json j;
  j["system"] = rs.name;
  j["kind"] = cfg.kind == "obs" ? "observability (Q)" : "controllability (R)";
  j["x"] = vector_json(x);
  j["matrix"] = matrix_json(g.matrix);
  j["min_eig"] = jacobi_eigen(g.matrix).values[0];
  j["det"] = g.matrix.determinant();
  j["truncation_error"] = g.truncation_error;
  j["horizon"] = g.horizon;
  const fs::path path = prepare_out(cfg) / "gramian.json";
  write_text(path, j.dump(2) + "\n");
  out << "wrote " << path.string() << '\n';
  return 0;
}

// --------------------------------------------------------------------------- residual / rank / scan

int cmd_residual(const Config& cfg, std::ostream& out) {
  const RegisteredSystem rs = load_system(cfg.system);
  const SystemModel& sys = rs.model;
  const int n = sys.n();
  std::string field_name = cfg.field;
  if (field_name.empty()) {
    if (cfg.equation == "dLya_ob") field_name = rs.has_certificate("Q") ? "Q" : "empirical-Q";
    else if (cfg.equation == "dRicc") field_name = rs.has_certificate("R") ? "R" : "empirical-R";
    else field_name = "P";
  }
  const MatrixField M = resolve_field(rs, field_name, improper(cfg));
  const std::vector<Vector> points =
      grid_points(box_arg(cfg.region, n, 0.5), shape_arg(cfg.grid, n, 5));

  std::vector<std::vector<ResidualReport>> reports(points.size());
  std::vector<std::string> errors(points.size());
  parallel_for(points.size(), cfg.jobs, [&](std::size_t i) {
    try {
      const Vector& x = points[i];
      if (cfg.equation == "dLya_ob") {
        reports[i] = {lyap_residual_obs(sys, M, x)};
      } else if (cfg.equation == "dRicc") {
        auto [a, b] = riccati_residual(sys, M, x);
        reports[i] = {a, b};
      } else if (cfg.equation == "dLya_con") {
        auto [a, b] = lyap_residual_ctrl(sys, M, x);
        reports[i] = {a, b};
      } else {
        reports[i] = {lyap_residual_open(sys, M, x)};
      }
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  for (const auto& e : errors) {
    if (!e.empty()) throw Error("residual evaluation failed: " + e);
  }

  std::ostringstream csv;
  for (int i = 0; i < n; ++i) csv << 'x' << (i + 1) << ',';
  csv << "equation,frobenius\n";
  std::map<std::string, double> worst;
  for (std::size_t k = 0; k < points.size(); ++k) {
    for (const auto& r : reports[k]) {
      for (int i = 0; i < n; ++i) csv << format_double(points[k][i]) << ',';
      const std::string name = equation_name(r.equation);
      csv << name << ',' << format_double(r.frobenius_norm) << '\n';
      worst[name] = std::max(worst[name], r.frobenius_norm);
    }
  }
  const fs::path path = prepare_out(cfg) / "residual.csv";
  write_text(path, csv.str());
  for (const auto& [name, value] : worst) {
    out << name << ": max Frobenius residual " << format_double(value) << " over "
        << points.size() << " points (field " << field_name << ")\n";
  }
  out << "wrote " << path.string() << '\n';
  return 0;
}

RankFunction rank_function(const SystemModel& sys, const std::string& kind, int depth) {
  if (kind == "ctrl") return [&sys, depth](const Vector& x) { return ctrl_bracket_matrix(sys, x, depth); };
  if (kind == "access") return [&sys, depth](const Vector& x) { return strong_access_matrix(sys, x, depth); };
  return [&sys, depth](const Vector& x) { return obs_codistribution(sys, x, depth); };
}

int cmd_rank(const Config& cfg, std::ostream& out) {
  const RegisteredSystem rs = load_system(cfg.system);
  const SystemModel& sys = rs.model;
  const int n = sys.n();
  const int depth = cfg.depth > 0 ? cfg.depth : default_depth(sys);
  const RankFunction fn = rank_function(sys, cfg.kind, depth);
  const fs::path dir = prepare_out(cfg);
  if (!cfg.x.empty()) {
    const Vector x = vector_arg(cfg.x, n, "x");
    const RankMatrix r = fn(x);
    ordered_json j;
    j["system"] = rs.name;
    j["kind"] = cfg.kind;
    j["depth"] = depth;
    j["x"] = vector_json(x);
    j["matrix"] = matrix_json(r.matrix);
    j["singular_values"] = vector_json(r.singular_values);
    j["rank"] = r.rank;
    j["tol_used"] = r.tol_used;
    write_text(dir / "rank.json", j.dump(2) + "\n");
    out << "rank " << r.rank << " (at least, depth " << depth << ")\nwrote "
        << (dir / "rank.json").string() << '\n';
    return 0;
  }
  if (cfg.region.empty()) throw UsageError("rank needs --x or --region");
  const RankSweep sweep =
      rank_sweep(fn, box_arg(cfg.region, n, 1.0), shape_arg(cfg.grid, n, 21), cfg.jobs);
  std::ostringstream csv;
  sweep.write_csv(csv);
  write_text(dir / "rank.csv", csv.str());
  std::map<int, int> counts;
  for (int r : sweep.rank) ++counts[r];
  for (const auto& [r, c] : counts) out << "rank " << r << ": " << c << " points\n";
  out << "wrote " << (dir / "rank.csv").string() << '\n';
  if (cfg.plot && n == 2) {
    out << "wrote " << emit_plot_script(dir / "rank.csv", "heatmap", "rank").string() << '\n';
  }
  return 0;
}

int cmd_pd_scan(const Config& cfg, std::ostream& out) {
  const RegisteredSystem rs = load_system(cfg.system);
  const int n = rs.model.n();
  const std::string name = cfg.field.empty() ? "empirical-Q" : cfg.field;
  const MatrixField M = resolve_field(rs, name, improper(cfg));
  const PDScan scan = pd_scan([&M](const Vector& x) { return M(x); }, box_arg(cfg.region, n, 0.3),
                              shape_arg(cfg.grid, n, 21), cfg.jobs);
  const fs::path path = prepare_out(cfg) / "scan.csv";
  std::ostringstream csv;
  scan.write_csv(csv);
  write_text(path, csv.str());
  double min_det = std::numeric_limits<double>::infinity();
  double min_eig = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < scan.points.size(); ++i) {
    if (scan.status[i] != "ok") continue;
    min_det = std::min(min_det, scan.det[i]);
    min_eig = std::min(min_eig, scan.min_eig[i]);
  }
  out << name << ": " << scan.positive_count() << " of " << scan.points.size()
      << " points positive definite; min eigenvalue " << format_double(min_eig)
      << ", min determinant " << format_double(min_det) << "\nwrote " << path.string() << '\n';
  if (cfg.plot && n == 2) out << "wrote " << emit_plot_script(path, "heatmap").string() << '\n';
  return 0;
}

// --------------------------------------------------------------------------- verify / example

int cmd_verify(const Config& cfg, std::ostream& out) {
  const RegisteredSystem rs = load_system(cfg.system);
  const SystemModel& sys = rs.model;
  const int n = sys.n();
  CheckOptions opts;
  opts.improper = improper(cfg);
  opts.jobs = cfg.jobs;
  Report report;
  const std::string& th = cfg.theorem;
  if (th == "thm1" || th == "thm3") {
    const auto pairs = random_pairs(box_arg(cfg.region, n, 0.1), cfg.check_samples, cfg.seed);
    report = th == "thm1" ? check_thm1(sys, pairs, opts) : check_thm3(sys, pairs, opts);
  } else if (th == "thm2" || th == "thm4") {
    const auto samples =
        random_directions(box_arg(cfg.region, n, 0.1), cfg.check_samples, cfg.seed);
    if (th == "thm4") {
      report = check_thm4(sys, samples, opts);
    } else {
      std::optional<MatrixField> cert;
      if (!cfg.no_certificate && rs.has_certificate("R")) cert = rs.certificate("R");
      report = check_thm2(sys, samples, cert, opts);
    }
  } else {
    RegionCheck region;
    region.region = box_arg(cfg.region, n, th == "thm5" ? 0.3 : 0.5);
    region.grid = shape_arg(cfg.grid, n, 11);
    region.samples = cfg.check_samples;
    region.seed = cfg.seed;
    region.depth = cfg.depth;
    if (th == "thm5") {
      const std::string name =
          !cfg.field.empty() ? cfg.field : (rs.has_certificate("Q") ? "Q" : "empirical-Q");
      report = check_thm5(sys, resolve_field(rs, name, opts.improper), region, opts);
    } else {
      const std::string name =
          !cfg.field.empty() ? cfg.field : (rs.has_certificate("P") ? "P" : "empirical-P");
      report = check_cor7(sys, resolve_field(rs, name, opts.improper), region, opts);
    }
  }
  const fs::path path = prepare_out(cfg) / "report.json";
  write_text(path, report.to_json() + "\n");
  out << report.theorem << ": " << verdict_name(report.verdict) << "\nwrote " << path.string()
      << '\n';
  return 0;
}

int cmd_example(const Config& cfg, std::ostream& out) {
  const RegisteredSystem rs = registry("paper_sec5");
  const SystemModel& sys = rs.model;
  const fs::path dir = prepare_out(cfg);
  const ImproperOptions opts = improper(cfg);
  Vector x0(2), e1(2), zero = Vector::Zero(2);
  x0 << 0.1, 0.1;
  e1 << 1, 0;

  const AugmentedField dual = dual_closed_loop(sys);
  const fs::path fig1 = write_trajectory(dir / "fig1_dual_closed_loop.csv", dual,
                                         dual.stack({x0, e1}), 10.0, false, 201, opts.integrator);
  const AugmentedField prolonged = prolong(sys, zero_input(1), zero_variation(1));
  const fs::path fig2 = write_trajectory(dir / "fig2_prolonged.csv", prolonged,
                                         prolonged.stack({x0, e1}), 10.0, false, 201,
                                         opts.integrator);
  const MatrixField Q = empirical_obs_field(sys, opts);
  const PDScan scan = pd_scan([&Q](const Vector& x) { return Q(x); },
                              Box{Vector::Constant(2, -0.3), Vector::Constant(2, 0.3)},
                              shape_arg(cfg.grid, 2, 21), cfg.jobs);
  {
    std::ostringstream csv;
    scan.write_csv(csv);
    write_text(dir / "fig3_det_Q.csv", csv.str());
  }

  ordered_json j;
  j["system"] = rs.name;
  const auto seq = closed_loop_bracket_sequence(sys, sys.input_column(0), zero, 2);
  j["closed_loop_brackets_at_0"] = {vector_json(seq[0]), vector_json(seq[1]), vector_json(seq[2])};
  j["ctrl_bracket_rank_at_0"] = ctrl_bracket_matrix(sys, zero, 2).rank;
  Vector on_line(2);
  on_line << -1, 0.3;
  j["obs_rank_at_0_depth1"] = obs_codistribution(sys, zero, 1).rank;
  j["obs_rank_at_-1_0.3_depth1"] = obs_codistribution(sys, on_line, 1).rank;
  double worst = 0.0;
  for (const Vector& x : grid_points(Box{Vector::Constant(2, -0.5), Vector::Constant(2, 0.5)}, {5, 5})) {
    const auto a = lyap_residual_ctrl(sys, rs.certificate("P"), x);
    const auto b = riccati_residual(sys, rs.certificate("R"), x);
    worst = std::max({worst, a.first.frobenius_norm, a.second.frobenius_norm,
                      b.first.frobenius_norm, b.second.frobenius_norm});
  }
  j["certificate_residual_max"] = worst;
  j["E_dC_at_0_e1"] = diff_controllability_fb(sys, zero, e1, opts).value;
  j["E_dO_at_0_e1"] = diff_observability(sys, zero, e1, opts).value;
  j["Q_scan_positive_points"] = scan.positive_count();
  j["Q_scan_points"] = scan.points.size();
  write_text(dir / "summary.json", j.dump(2) + "\n");

  for (const fs::path& p : {fig1, fig2}) {
    out << "wrote " << p.string() << "\nwrote " << emit_plot_script(p, "timeseries").string() << '\n';
  }
  out << "wrote " << (dir / "fig3_det_Q.csv").string() << "\nwrote "
      << emit_plot_script(dir / "fig3_det_Q.csv", "heatmap").string() << '\n';
  out << "wrote " << (dir / "summary.json").string() << '\n';
  out << "empirical Q positive definite at " << scan.positive_count() << " of "
      << scan.points.size() << " grid points\n";
  return 0;
}

std::vector<std::string> read_header(const fs::path& csv) {
  std::ifstream f(csv);
  if (!f) throw Error("cannot read " + csv.string());
  std::string line;
  std::getline(f, line);
  std::vector<std::string> cols;
  std::string item;
  std::istringstream in(line);
  while (std::getline(in, item, ',')) cols.push_back(item);
  return cols;
}

}  // namespace

fs::path emit_plot_script(const fs::path& csv, const std::string& kind,
                          const std::string& value_column) {
  if (kind != "timeseries" && kind != "heatmap") throw Error("unknown plot kind '" + kind + "'");
  if (!fs::exists(csv)) throw Error("no such CSV file: " + csv.string());
  const std::vector<std::string> cols = read_header(csv);
  const std::string file = csv.filename().string();
  const std::string png = csv.stem().string() + ".png";
  std::ostringstream gp;
  gp << "# gnuplot script for " << file << "\n"
     << "set datafile separator ','\n"
     << "set terminal pngcairo size 900,650\n"
     << "set output '" << png << "'\n";
  if (kind == "timeseries") {
    if (cols.size() < 2 || cols[0] != "t") throw Error(file + " has no leading 't' column");
    gp << "set xlabel 't'\nset grid\nset key outside right\n"
       << "plot for [i=2:" << cols.size() << "] '" << file
       << "' using 1:i with lines title columnhead(i)\n";
  } else {
    std::size_t column = 0;
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (cols[i] == value_column) column = i + 1;
    }
    if (cols.size() < 3 || cols[0] != "x1" || cols[1] != "x2" || column == 0) {
      throw Error(file + " needs columns x1, x2 and " + value_column);
    }
    gp << "set xlabel 'x1'\nset ylabel 'x2'\nset title '" << value_column << "'\n"
       << "set view map\nset size ratio -1\n"
       << "plot '" << file << "' every ::1 using 1:2:" << column << " with image notitle\n";
  }
  fs::path script = csv;
  script.replace_extension(".gp");
  write_text(script, gp.str());
  return script;
}

std::vector<std::string> subcommands() {
  std::vector<std::string> names;
  for (const auto& [name, list] : examples()) names.push_back(name);
  return names;
}

std::vector<std::string> example_invocations(const std::string& subcommand) {
  auto it = examples().find(subcommand);
  return it == examples().end() ? std::vector<std::string>{} : it->second;
}

std::string check_parse(const std::string& command_line) {
  CLI::App app{"diffgram"};
  Config cfg;
  build(app, cfg);
  try {
    app.parse(command_line, false);
  } catch (const CLI::ParseError& e) {
    return e.what();
  }
  return "";
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"diffgram: differential and incremental energy functions, Gramians and rank "
               "conditions of control-affine systems"};
  Config cfg;
  build(app, cfg);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (app.got_subcommand("simulate")) return cmd_simulate(cfg, out);
    if (app.got_subcommand("energy")) return cmd_energy(cfg, out);
    if (app.got_subcommand("gramian")) return cmd_gramian(cfg, out);
    if (app.got_subcommand("residual")) return cmd_residual(cfg, out);
    if (app.got_subcommand("rank")) return cmd_rank(cfg, out);
    if (app.got_subcommand("pd-scan")) return cmd_pd_scan(cfg, out);
    if (app.got_subcommand("verify")) return cmd_verify(cfg, out);
    if (app.got_subcommand("example")) return cmd_example(cfg, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\nRun with --help for more information.\n";
    return 2;
  } catch (const ParseError& e) {
    err << "error: parse: " << e.what() << '\n';
    return 1;
  } catch (const SpecError& e) {
    err << "error: spec: " << e.what() << '\n';
    return 1;
  } catch (const ModelError& e) {
    err << "error: model: " << e.what() << '\n';
    return 1;
  } catch (const IntegrationError& e) {
    err << "error: integration: " << e.what() << '\n';
    return 1;
  } catch (const DivergenceError& e) {
    err << "error: divergence: " << e.what() << " (horizon " << format_double(e.horizon())
        << ")\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace diffgram::cli
