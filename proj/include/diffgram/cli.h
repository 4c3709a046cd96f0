#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace diffgram::cli {

/// Runs the command line; returns 0 on success, 1 on analysis errors and 2
/// on usage errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Example invocations (without the program name) printed in the help
/// footers, keyed by subcommand.
std::vector<std::string> example_invocations(const std::string& subcommand);
std::vector<std::string> subcommands();

/// Parses `command_line` (no program name) without executing anything.
/// Returns an empty string on success, the parser's message otherwise.
std::string check_parse(const std::string& command_line);

/// Writes a gnuplot script next to `csv` (same stem, ".gp") and returns its
/// path. kind is "timeseries" (every column against the first) or
/// "heatmap" (column `value_column` over x1, x2; defaults to "det").
std::filesystem::path emit_plot_script(const std::filesystem::path& csv, const std::string& kind,
                                       const std::string& value_column = "det");

}  // namespace diffgram::cli
