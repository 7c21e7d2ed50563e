#pragma once

// Run configuration from a TOML subset or JSON.
//
// Supported TOML: comments, [table] and [a.b] headers, key = value with
// strings, integers, floats, booleans and single-line arrays of those.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "coagtree/convergence.hpp"
#include "coagtree/errors.hpp"
#include "coagtree/grid.hpp"
#include "coagtree/kernel.hpp"
#include "coagtree/solver.hpp"

namespace coagtree {

/// Parsed document plus the source line of every key (dotted path).
struct ConfigDocument {
  nlohmann::json root = nlohmann::json::object();
  std::map<std::string, std::size_t> lines;

  std::size_t line_of(const std::string& path) const {
    auto it = lines.find(path);
    return it == lines.end() ? 0 : it->second;
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

/// Drops a trailing comment that is not inside a string.
inline std::string_view strip_comment(std::string_view s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

inline bool valid_key(std::string_view k) {
  if (k.empty()) return false;
  for (char c : k) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') return false;
  }
  return true;
}

inline nlohmann::json parse_toml_scalar(std::string_view v, const std::string& key, std::size_t line) {
  v = trim(v);
  if (v.empty()) throw config_error(key, "missing value", line);
  if (v.front() == '"') {
    if (v.size() < 2 || v.back() != '"') throw config_error(key, "unterminated string", line);
    std::string out;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
      if (v[i] == '\\' && i + 2 < v.size()) {
        const char e = v[++i];
        out += e == 'n' ? '\n' : e == 't' ? '\t' : e;
      } else {
        out += v[i];
      }
    }
    return out;
  }
  if (v == "true") return true;
  if (v == "false") return false;
  std::string num;
  for (char c : v) {
    if (c != '_') num += c;
  }
  try {
    std::size_t used = 0;
    const bool integral = num.find_first_of(".eE") == std::string::npos && num != "inf" && num != "nan";
    if (integral) {
      const long long i = std::stoll(num, &used);
      if (used == num.size()) return i;
    } else {
      const double d = std::stod(num, &used);
      if (used == num.size()) return d;
    }
  } catch (const std::exception&) {
  }
  throw config_error(key, "cannot parse value '" + std::string(v) + "'", line);
}

inline nlohmann::json parse_toml_value(std::string_view v, const std::string& key, std::size_t line) {
  v = trim(v);
  if (v.empty() || v.front() != '[') return parse_toml_scalar(v, key, line);
  if (v.back() != ']') throw config_error(key, "arrays must close on the same line", line);
  nlohmann::json arr = nlohmann::json::array();
  std::string_view body = trim(v.substr(1, v.size() - 2));
  while (!body.empty()) {
    bool quoted = false;
    std::size_t cut = body.size();
    for (std::size_t i = 0; i < body.size(); ++i) {
      if (body[i] == '"') quoted = !quoted;
      if (body[i] == ',' && !quoted) {
        cut = i;
        break;
      }
    }
    const auto item = trim(body.substr(0, cut));
    if (item.empty()) {
      if (cut == body.size()) break;
      throw config_error(key, "empty array element", line);
    }
    arr.push_back(parse_toml_scalar(item, key, line));
    body = cut == body.size() ? std::string_view{} : trim(body.substr(cut + 1));
  }
  return arr;
}

}  // namespace detail

inline ConfigDocument parse_toml(std::string_view text) {
  ConfigDocument doc;
  std::vector<std::string> table;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = detail::trim(detail::strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) throw config_error("", "malformed table header", line_no);
      table.clear();
      std::string_view name = detail::trim(line.substr(1, line.size() - 2));
      std::string path;
      while (!name.empty()) {
        const auto dot = name.find('.');
        const auto part = detail::trim(name.substr(0, dot));
        if (!detail::valid_key(part)) throw config_error(std::string(name), "invalid table name", line_no);
        table.emplace_back(part);
        name = dot == std::string_view::npos ? std::string_view{} : name.substr(dot + 1);
      }
      nlohmann::json* node = &doc.root;
      for (const auto& t : table) {
        path += (path.empty() ? "" : ".") + t;
        if (!node->contains(t)) (*node)[t] = nlohmann::json::object();
        node = &(*node)[t];
        if (!node->is_object()) throw config_error(path, "is not a table", line_no);
        doc.lines.emplace(path, line_no);
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw config_error("", "expected key = value", line_no);
    const auto key = detail::trim(line.substr(0, eq));
    std::string path;
    for (const auto& t : table) path += t + ".";
    path += std::string(key);
    if (!detail::valid_key(key)) throw config_error(path, "invalid key", line_no);
    nlohmann::json* node = &doc.root;
    for (const auto& t : table) node = &(*node)[t];
    if (node->contains(std::string(key))) throw config_error(path, "duplicate key", line_no);
    (*node)[std::string(key)] = detail::parse_toml_value(line.substr(eq + 1), path, line_no);
    doc.lines[path] = line_no;
  }
  return doc;
}

inline ConfigDocument parse_json_config(std::string_view text) {
  ConfigDocument doc;
  try {
    doc.root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw config_error("", e.what());
  }
  if (!doc.root.is_object()) throw config_error("", "top level must be an object");
  return doc;
}

/// Chooses JSON for a .json extension or a leading '{', TOML otherwise.
inline ConfigDocument load_config_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("", "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  const bool json = path.ends_with(".json") || (first != std::string::npos && text[first] == '{');
  return json ? parse_json_config(text) : parse_toml(text);
}

/// Applies a `dotted.key=value` override; the value uses TOML syntax.
/// Overridden keys report line 0.
inline void apply_override(ConfigDocument& doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) throw config_error(std::string(assignment), "override must be key=value");
  const std::string path(detail::trim(assignment.substr(0, eq)));
  nlohmann::json* node = &doc.root;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const auto part = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (!detail::valid_key(part)) throw config_error(path, "invalid key");
    if (dot == std::string::npos) {
      (*node)[part] = detail::parse_toml_value(assignment.substr(eq + 1), path, 0);
      break;
    }
    if (!node->contains(part)) (*node)[part] = nlohmann::json::object();
    node = &(*node)[part];
    if (!node->is_object()) throw config_error(path.substr(0, dot), "is not a table");
    start = dot + 1;
  }
  doc.lines.erase(path);
}

namespace detail {

class ConfigReader {
 public:
  explicit ConfigReader(const ConfigDocument& doc) : doc_(doc) {}

  bool has(const std::string& path) const { return find(path) != nullptr; }

  const nlohmann::json& require(const std::string& path) const {
    const auto* v = find(path);
    if (v == nullptr) throw config_error(path, "missing required field", parent_line(path));
    return *v;
  }

  double number(const std::string& path) const {
    const auto& v = require(path);
    if (!v.is_number()) throw config_error(path, "must be a number", doc_.line_of(path));
    return v.get<double>();
  }

  long long integer(const std::string& path) const {
    const auto& v = require(path);
    if (!v.is_number_integer()) throw config_error(path, "must be an integer", doc_.line_of(path));
    return v.get<long long>();
  }

  std::string string(const std::string& path) const {
    const auto& v = require(path);
    if (!v.is_string()) throw config_error(path, "must be a string", doc_.line_of(path));
    return v.get<std::string>();
  }

  bool boolean(const std::string& path) const {
    const auto& v = require(path);
    if (!v.is_boolean()) throw config_error(path, "must be a boolean", doc_.line_of(path));
    return v.get<bool>();
  }

  std::vector<int> integers(const std::string& path) const {
    const auto& v = require(path);
    if (!v.is_array() || v.empty()) throw config_error(path, "must be a nonempty array", doc_.line_of(path));
    std::vector<int> out;
    for (const auto& e : v) {
      if (!e.is_number_integer()) throw config_error(path, "elements must be integers", doc_.line_of(path));
      out.push_back(e.get<int>());
    }
    return out;
  }

  [[noreturn]] void fail(const std::string& path, const std::string& message) const {
    throw config_error(path, message, doc_.line_of(path));
  }

 private:
  const nlohmann::json* find(const std::string& path) const {
    const nlohmann::json* node = &doc_.root;
    std::size_t start = 0;
    while (start <= path.size()) {
      const auto dot = std::min(path.find('.', start), path.size());
      const auto part = path.substr(start, dot - start);
      if (!node->is_object() || !node->contains(part)) return nullptr;
      node = &(*node)[part];
      start = dot + 1;
    }
    return node;
  }

  std::size_t parent_line(const std::string& path) const {
    const auto dot = path.rfind('.');
    return dot == std::string::npos ? 0 : doc_.line_of(path.substr(0, dot));
  }

  const ConfigDocument& doc_;
};

inline KernelSpec read_kernel(const ConfigReader& r, const GridSpec& grid) {
  const auto type = r.string("kernel.type");
  if (type == "constant") return kernels::Constant{};
  if (type == "power") return kernels::SeparablePower{r.number("kernel.lambda")};
  if (type == "additive") {
    const double p = r.number("kernel.exponent");
    return kernels::GeneralAdditive{GridFunction::sample(grid, [p](double x) { return std::pow(x, p); })};
  }
  r.fail("kernel.type", "unknown kernel '" + type + "' (expected constant, power or additive)");
}

}  // namespace detail

/// Grid, kernel, data and run parameters. run.order and run.steps are only
/// required when `with_run` is set.
inline SolverConfig solver_config_from(const ConfigDocument& doc, bool with_run = true) {
  detail::ConfigReader r(doc);
  SolverConfig c;
  try {
    c.grid = GridSpec(r.number("grid.length"), static_cast<std::size_t>(r.integer("grid.nodes")));
  } catch (const domain_error& e) {
    r.fail("grid.nodes", e.what());
  }
  c.kernel = detail::read_kernel(r, c.grid);
  const auto data = r.string("initial.data");
  if (data == "exp_over_x") {
    c.data = InitialData::exp_over_x;
  } else if (data == "exp") {
    c.data = InitialData::exp;
  } else {
    r.fail("initial.data", "unknown initial data '" + data + "' (expected exp_over_x or exp)");
  }
  c.horizon = r.number("run.horizon");
  if (with_run) {
    c.order = static_cast<int>(r.integer("run.order"));
    c.steps = static_cast<int>(r.integer("run.steps"));
  } else {
    c.order = 1;
    c.steps = 1;
  }
  if (r.has("run.snapshot_every")) c.snapshot_every = static_cast<int>(r.integer("run.snapshot_every"));
  if (r.has("run.gelation_guard")) c.gelation_guard = r.boolean("run.gelation_guard");
  try {
    validate(c);
  } catch (const config_error& e) {
    r.fail("run." + e.field(), e.what());
  }
  return c;
}

inline SweepConfig sweep_config_from(const ConfigDocument& doc) {
  detail::ConfigReader r(doc);
  SweepConfig s;
  s.base = solver_config_from(doc, false);
  s.orders = r.integers("convergence.orders");
  s.steps = r.integers("convergence.steps");
  for (int n : s.orders) {
    if (n < 1 || n > default_grade_cap) r.fail("convergence.orders", "orders must lie in 1..12");
  }
  for (int m : s.steps) {
    if (m < 1) r.fail("convergence.steps", "step counts must be positive");
  }
  const auto ref = r.string("convergence.reference");
  if (ref == "exact") {
    s.reference = ReferenceKind::exact;
  } else if (ref == "self") {
    s.reference = ReferenceKind::self;
    s.reference_order = static_cast<int>(r.integer("convergence.reference_order"));
    s.reference_steps = static_cast<int>(r.integer("convergence.reference_steps"));
  } else {
    r.fail("convergence.reference", "expected exact or self");
  }
  if (r.has("convergence.workers")) s.workers = static_cast<unsigned>(r.integer("convergence.workers"));
  return s;
}

}  // namespace coagtree
