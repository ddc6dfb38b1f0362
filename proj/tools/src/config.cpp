#include "fts_cli/config.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace fts::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ConfigError("config: " + msg); }

const json& require(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) fail(std::string("missing key '") + key + "'");
  return *it;
}

int as_int(const json& v, const std::string& what) {
  if (!v.is_number_integer()) fail(what + " must be an integer");
  return v.get<int>();
}

double as_number(const json& v, const std::string& what) {
  if (!v.is_number()) fail(what + " must be a number");
  return v.get<double>();
}

Expr as_expr(const json& v, const std::string& what) {
  if (v.is_number()) return Expr::constant(v.get<double>());
  if (!v.is_string()) fail(what + " must be an expression string or a number");
  try {
    return Expr::parse(v.get<std::string>());
  } catch (const ParseError& e) {
    fail(what + ": " + e.what());
  }
}

std::vector<Expr> expr_list(const json& v, int n, const std::string& what) {
  if (!v.is_array() || static_cast<int>(v.size()) != n)
    fail(what + " must be a list of " + std::to_string(n) + " entries");
  std::vector<Expr> out;
  for (std::size_t j = 0; j < v.size(); ++j)
    out.push_back(as_expr(v[j], what + "[" + std::to_string(j + 1) + "]"));
  return out;
}

void check_square(const json& v, int n, const std::string& what) {
  if (!v.is_array() || static_cast<int>(v.size()) != n) fail(what + " must have " + std::to_string(n) + " rows");
  for (std::size_t j = 0; j < v.size(); ++j)
    if (!v[j].is_array() || static_cast<int>(v[j].size()) != n)
      fail(what + " row " + std::to_string(j + 1) + " must have " + std::to_string(n) + " entries");
}

BoundaryMatrix boundary_from(const json& v, int n) {
  const auto un = static_cast<std::size_t>(n);
  if (v.is_array()) {
    check_square(v, n, "P");
    Matrix p(un);
    for (std::size_t j = 0; j < un; ++j)
      for (std::size_t k = 0; k < un; ++k)
        p(j, k) = as_number(v[j][k], "P[" + std::to_string(j + 1) + "][" + std::to_string(k + 1) + "]");
    return BoundaryMatrix(p);
  }
  if (!v.is_object()) fail("P must be a matrix or an object with 'mask' and 'q'");
  const json& mask = require(v, "mask");
  const json& q = require(v, "q");
  check_square(mask, n, "P.mask");
  check_square(q, n, "P.q");
  std::vector<BoundaryEntry> entries;
  for (std::size_t j = 0; j < un; ++j)
    for (std::size_t k = 0; k < un; ++k) {
      const std::string at = "[" + std::to_string(j + 1) + "][" + std::to_string(k + 1) + "]";
      const int w = as_int(mask[j][k], "P.mask" + at);
      if (w != 0 && w != 1) fail("P.mask" + at + " must be 0 or 1");
      entries.emplace_back(MaskedEntry{w == 1, as_expr(q[j][k], "P.q" + at)});
    }
  return BoundaryMatrix(un, std::move(entries));
}

} // namespace

SystemConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("top level must be an object");
  const int version = as_int(require(doc, "version"), "version");
  if (version != kConfigVersion) fail("unsupported version " + std::to_string(version));

  SystemConfig c;
  c.n = as_int(require(doc, "n"), "n");
  c.m = as_int(require(doc, "m"), "m");
  if (c.n < 2) fail("n must be at least 2");
  if (c.m < 0 || c.m > c.n) fail("m must lie in [0, n]");
  c.a = expr_list(require(doc, "a"), c.n, "a");
  if (doc.contains("b")) {
    c.b = expr_list(doc["b"], c.n, "b");
  } else {
    c.b.assign(static_cast<std::size_t>(c.n), Expr::constant(0.0));
  }
  c.boundary = boundary_from(require(doc, "P"), c.n);
  if (doc.contains("phi")) c.phi = InitialData(expr_list(doc["phi"], c.n, "phi"));
  if (doc.contains("horizon")) c.horizon = as_number(doc["horizon"], "horizon");

  if (doc.contains("tolerances")) {
    const json& tol = doc["tolerances"];
    if (tol.contains("minor")) c.minor_tolerance = as_number(tol["minor"], "tolerances.minor");
    if (tol.contains("vanish")) c.vanish_tolerance = as_number(tol["vanish"], "tolerances.vanish");
  }
  if (doc.contains("grid")) {
    const json& grid = doc["grid"];
    if (grid.contains("validation")) c.validation_points = as_int(grid["validation"], "grid.validation");
    if (grid.contains("spatial")) c.spatial_points = as_int(grid["spatial"], "grid.spatial");
    if (grid.contains("dt") && !grid["dt"].is_null()) c.dt = as_number(grid["dt"], "grid.dt");
  }
  return c;
}

SystemConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

HyperbolicSystem SystemConfig::system() const {
  return HyperbolicSystem(n, m, a, b, boundary, horizon, validation_points);
}

SimulationOptions SystemConfig::simulation_options() const {
  SimulationOptions opts;
  opts.dt = dt;
  opts.spatial_points = spatial_points;
  return opts;
}

} // namespace fts::cli
