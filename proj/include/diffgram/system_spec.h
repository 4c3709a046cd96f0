#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "diffgram/expr.h"

namespace diffgram {

/**
 * Textual description of a control-affine system
 *
 *   xdot = f(x) + g(x) u,   y = h(x),   optional feedback u = k(x),
 *
 * plus optional n x n candidate matrix fields named "P", "Q" or "R".
 * Matrices are stored row-major.
 */
struct SystemSpec {
  int n = 0;
  int m = 0;
  int p = 0;
  std::vector<expr::Expression> f;
  std::vector<expr::Expression> g;
  std::vector<expr::Expression> h;
  std::optional<std::vector<expr::Expression>> k;
  std::map<std::string, std::vector<expr::Expression>> fields;
};

/// Parses the JSON document
///   {"n":2,"m":1,"p":1,"f":[..],"g":[[..],[..]],"h":[..],"k":[..]?,
///    "fields":{"P":[[..],[..]]?, ...}}
/// Throws SpecError for missing fields, dimension mismatches and expressions
/// that reference variables beyond x_n; ParseError for bad expressions.
SystemSpec parse_system_spec(std::string_view json_text);

SystemSpec load_system_spec(const std::filesystem::path& path);

}  // namespace diffgram
