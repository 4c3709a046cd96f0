#include "diffgram/system_spec.h"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace diffgram {
namespace {

using nlohmann::json;

int read_dimension(const json& doc, const char* key) {
  if (!doc.contains(key)) throw SpecError(std::string("missing field '") + key + "'");
  const json& v = doc.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw SpecError(std::string("field '") + key + "' must be a non-negative integer");
  }
  return v.get<int>();
}

expr::Expression read_expression(const json& v, const std::string& where, int n) {
  expr::Expression e;
  if (v.is_string()) {
    e = expr::parse_expression(v.get<std::string>());
  } else if (v.is_number()) {
    e = expr::Expression::constant(v.get<double>());
  } else {
    throw SpecError(where + ": expected an expression string");
  }
  if (e.max_variable_index() > n) {
    throw SpecError(where + ": references x" + std::to_string(e.max_variable_index()) +
                    " but n = " + std::to_string(n));
  }
  return e;
}

std::vector<expr::Expression> read_vector(const json& doc, const char* key, int expected, int n) {
  if (!doc.contains(key)) throw SpecError(std::string("missing field '") + key + "'");
  const json& arr = doc.at(key);
  if (!arr.is_array()) throw SpecError(std::string("field '") + key + "' must be an array");
  if (static_cast<int>(arr.size()) != expected) {
    throw SpecError(std::string("dimension mismatch: '") + key + "' has " +
                    std::to_string(arr.size()) + " entries, expected " + std::to_string(expected));
  }
  std::vector<expr::Expression> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    out.push_back(read_expression(arr[i], std::string(key) + "[" + std::to_string(i) + "]", n));
  }
  return out;
}

std::vector<expr::Expression> read_matrix(const json& arr, const std::string& key, int rows,
                                          int cols, int n) {
  if (!arr.is_array() || static_cast<int>(arr.size()) != rows) {
    throw SpecError("dimension mismatch: '" + key + "' must have " + std::to_string(rows) +
                    " rows");
  }
  std::vector<expr::Expression> out;
  for (int r = 0; r < rows; ++r) {
    const json& row = arr[r];
    if (!row.is_array() || static_cast<int>(row.size()) != cols) {
      throw SpecError("dimension mismatch: row " + std::to_string(r) + " of '" + key +
                      "' must have " + std::to_string(cols) + " entries");
    }
    for (int c = 0; c < cols; ++c) {
      out.push_back(read_expression(
          row[c], key + "[" + std::to_string(r) + "][" + std::to_string(c) + "]", n));
    }
  }
  return out;
}

}  // namespace

SystemSpec parse_system_spec(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SpecError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SpecError("system spec must be a JSON object");

  SystemSpec spec;
  spec.n = read_dimension(doc, "n");
  spec.m = read_dimension(doc, "m");
  spec.p = read_dimension(doc, "p");
  if (spec.n < 1) throw SpecError("n must be at least 1");

  spec.f = read_vector(doc, "f", spec.n, spec.n);
  if (!doc.contains("g")) throw SpecError("missing field 'g'");
  spec.g = read_matrix(doc.at("g"), "g", spec.n, spec.m, spec.n);
  spec.h = read_vector(doc, "h", spec.p, spec.n);
  if (doc.contains("k") && !doc.at("k").is_null()) {
    spec.k = read_vector(doc, "k", spec.m, spec.n);
  }
  if (doc.contains("fields")) {
    const json& fields = doc.at("fields");
    if (!fields.is_object()) throw SpecError("'fields' must be an object");
    for (const auto& [name, value] : fields.items()) {
      if (name != "P" && name != "Q" && name != "R") {
        throw SpecError("unknown candidate field '" + name + "' (expected P, Q or R)");
      }
      spec.fields[name] = read_matrix(value, name, spec.n, spec.n, spec.n);
    }
  }
  return spec;
}

SystemSpec load_system_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open system spec '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_system_spec(buffer.str());
}

}  // namespace diffgram
