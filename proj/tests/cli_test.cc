#include "diffgram/cli.h"

#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "diffgram/errors.h"

namespace diffgram::cli {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_args(std::vector<std::string> args) {
  args.insert(args.begin(), "diffgram");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path(::testing::TempDir()) / ("diffgram_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

TEST(CliTest, EveryDocumentedExampleParses) {
  for (const auto& sub : subcommands()) {
    const auto examples = example_invocations(sub);
    EXPECT_FALSE(examples.empty()) << sub;
    for (const auto& line : examples) EXPECT_EQ(check_parse(line), "") << line;
  }
}

TEST(CliTest, HelpListsExamples) {
  const Outcome top = run_args({"--help"});
  EXPECT_EQ(top.code, 0);
  for (const auto& sub : subcommands()) EXPECT_NE(top.out.find(sub), std::string::npos) << sub;
  const Outcome rank = run_args({"rank", "--help"});
  EXPECT_EQ(rank.code, 0);
  EXPECT_NE(rank.out.find("diffgram rank --system paper_sec5"), std::string::npos);
}

TEST(CliTest, UsageErrorsExitWithTwo) {
  EXPECT_EQ(run_args({}).code, 2);
  EXPECT_EQ(run_args({"energy", "--system", "linear_scalar", "--kind", "xx", "--x0", "0"}).code, 2);
  EXPECT_EQ(run_args({"energy", "--system", "linear_scalar", "--kind", "dO", "--x0", "0,1",
                      "--dx0", "1", "--out", scratch("usage").string()})
                .code,
            2);
  EXPECT_NE(check_parse("verify --theorem thm9 --system paper_sec5"), "");
}

TEST(CliTest, AnalysisErrorsExitWithOne) {
  const Outcome o = run_args({"energy", "--system", "no_such_system", "--kind", "dO", "--x0",
                              "0", "--dx0", "1"});
  EXPECT_EQ(o.code, 1);
  EXPECT_NE(o.err.find("unknown system"), std::string::npos);
}

TEST(CliTest, EnergyWritesJson) {
  const fs::path dir = scratch("energy");
  const Outcome o = run_args({"energy", "--system", "linear_scalar", "--kind", "dC", "--x0", "0",
                              "--dx0", "3", "--out", dir.string()});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_NE(slurp(dir / "energy.json").find("\"definition\": \"E_dC\""), std::string::npos);
}

TEST(CliTest, SimulateWritesCsvAndScript) {
  const fs::path dir = scratch("simulate");
  const Outcome o = run_args({"simulate", "--system", "paper_sec5", "--mode", "prolonged", "--x0",
                              "0.1,0.1", "--dx0", "1,0", "--samples", "11", "--plot", "--out",
                              dir.string()});
  ASSERT_EQ(o.code, 0) << o.err;
  const std::string csv = slurp(dir / "trajectory.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,x1,x2,dx1,dx2,norm_dx");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 12);
  EXPECT_NE(slurp(dir / "trajectory.gp").find("plot for"), std::string::npos);
}

TEST(CliTest, PlotScriptErrors) {
  const fs::path dir = scratch("plot");
  fs::create_directories(dir);
  EXPECT_THROW(emit_plot_script(dir / "missing.csv", "timeseries"), Error);
  std::ofstream(dir / "a.csv") << "t,x1\n0,1\n";
  EXPECT_THROW(emit_plot_script(dir / "a.csv", "surface"), Error);
  EXPECT_THROW(emit_plot_script(dir / "a.csv", "heatmap"), Error);
  EXPECT_EQ(emit_plot_script(dir / "a.csv", "timeseries"), dir / "a.gp");
}

TEST(CliTest, VerifyIsDeterministicAcrossJobCounts) {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  for (const auto& [dir, jobs] : {std::pair{a, "1"}, std::pair{b, "3"}}) {
    const Outcome o = run_args({"verify", "--system", "paper_sec5", "--theorem", "thm3",
                                "--samples", "3", "--seed", "5", "--jobs", jobs, "--out",
                                dir.string()});
    ASSERT_EQ(o.code, 0) << o.err;
  }
  EXPECT_EQ(slurp(a / "report.json"), slurp(b / "report.json"));
}

TEST(CliTest, PdScanIsDeterministicAcrossJobCounts) {
  const fs::path a = scratch("scan_a"), b = scratch("scan_b");
  for (const auto& [dir, jobs] : {std::pair{a, "1"}, std::pair{b, "2"}}) {
    ASSERT_EQ(run_args({"pd-scan", "--system", "paper_sec5", "--region=-0.3,0.3,-0.3,0.3",
                        "--grid", "4x3", "--jobs", jobs, "--out", dir.string()})
                  .code,
              0);
  }
  EXPECT_EQ(slurp(a / "scan.csv"), slurp(b / "scan.csv"));
}

}  // namespace
}  // namespace diffgram::cli
