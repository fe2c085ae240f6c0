#include "krymat/cli/config.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace krymat::cli {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class Int>
Int parse_int(const std::string& key, const std::string& text) {
  Int v{};
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw ConfigError(key + ": expected an integer, got '" + text + "'");
  return v;
}

double parse_double(const std::string& key, const std::string& text) {
  if (text.empty()) throw ConfigError(key + ": expected a number");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(v)) {
    throw ConfigError(key + ": expected a finite number, got '" + text + "'");
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError(key + ": expected true or false, got '" + text + "'");
}

struct Field {
  const char* section;
  const char* key;
  std::function<void(RunConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define KRYMAT_STR_FIELD(sec, name)                                                        \
  Field {                                                                                  \
    sec, #name, [](RunConfig& c, const std::string&, const std::string& v) { c.name = v; }, \
        [](const RunConfig& c) { return c.name; }                                          \
  }
#define KRYMAT_INT_FIELD(sec, name, type)                                                                    \
  Field {                                                                                                    \
    sec, #name,                                                                                              \
        [](RunConfig& c, const std::string& k, const std::string& v) { c.name = parse_int<type>(k, v); }, \
        [](const RunConfig& c) { return std::to_string(c.name); }                                            \
  }
#define KRYMAT_DBL_FIELD(sec, name)                                                                        \
  Field {                                                                                                  \
    sec, #name, [](RunConfig& c, const std::string& k, const std::string& v) { c.name = parse_double(k, v); }, \
        [](const RunConfig& c) { return fmt_double(c.name); }                                              \
  }
#define KRYMAT_BOOL_FIELD(sec, name)                                                                     \
  Field {                                                                                                \
    sec, #name, [](RunConfig& c, const std::string& k, const std::string& v) { c.name = parse_bool(k, v); }, \
        [](const RunConfig& c) { return std::string(c.name ? "true" : "false"); }                        \
  }

const std::vector<Field>& schema() {
  static const std::vector<Field> fields = {
      KRYMAT_STR_FIELD("problem", kind),
      KRYMAT_INT_FIELD("problem", n0, std::int64_t),
      KRYMAT_INT_FIELD("problem", n, std::int64_t),
      KRYMAT_INT_FIELD("problem", p, std::int64_t),
      KRYMAT_INT_FIELD("problem", seed, std::uint64_t),
      KRYMAT_BOOL_FIELD("problem", symmetric),
      KRYMAT_STR_FIELD("problem", bundle),
      KRYMAT_DBL_FIELD("grid", t0),
      KRYMAT_DBL_FIELD("grid", tf),
      KRYMAT_INT_FIELD("grid", steps, std::int64_t),
      KRYMAT_STR_FIELD("solver", method),
      KRYMAT_STR_FIELD("solver", target),
      KRYMAT_INT_FIELD("solver", m_max, std::int64_t),
      KRYMAT_DBL_FIELD("solver", tol),
      KRYMAT_INT_FIELD("solver", l, int),
      KRYMAT_INT_FIELD("solver", substeps, std::int64_t),
      KRYMAT_INT_FIELD("solver", probe_stride, std::int64_t),
      KRYMAT_DBL_FIELD("solver", arnoldi_tol),
      KRYMAT_DBL_FIELD("solver", trunc_tol),
      KRYMAT_BOOL_FIELD("output", factors),
      KRYMAT_INT_FIELD("output", dense_cap, std::int64_t),
  };
  return fields;
}

#undef KRYMAT_STR_FIELD
#undef KRYMAT_INT_FIELD
#undef KRYMAT_DBL_FIELD
#undef KRYMAT_BOOL_FIELD

const std::set<std::string> kKinds = {"laplacian2d", "random-stable", "sylvester-q2", "bundle"};
const std::set<std::string> kMethods = {"galerkin", "egadl", "expo-global", "expo-extended", "oracle-check"};

}  // namespace

std::vector<std::pair<std::string, std::string>> RunConfig::settings() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const Field& f : schema()) out.emplace_back(std::string(f.section) + "." + f.key, f.get(*this));
  return out;
}

void validate(const RunConfig& c) {
  if (!kKinds.count(c.kind)) throw ConfigError("problem.kind: unknown kind '" + c.kind + "'");
  if (!kMethods.count(c.method)) throw ConfigError("solver.method: unknown method '" + c.method + "'");
  if (c.method == "oracle-check" && (c.target == "oracle-check" || !kMethods.count(c.target))) {
    throw ConfigError("solver.target: unknown method '" + c.target + "'");
  }
  const std::string effective = c.method == "oracle-check" ? c.target : c.method;
  const bool sylvester = effective == "galerkin";
  if (c.kind == "sylvester-q2" && !sylvester) {
    throw ConfigError("problem.kind = sylvester-q2 requires solver.method = galerkin");
  }
  if ((c.kind == "laplacian2d" || c.kind == "random-stable") && sylvester) {
    throw ConfigError("problem.kind = " + c.kind + " is a Lyapunov problem; galerkin needs sylvester-q2 or a bundle");
  }
  if (c.kind == "bundle" && c.bundle.empty()) throw ConfigError("problem.bundle: required when kind = bundle");
  if (c.n0 < 2) throw ConfigError("problem.n0: must be >= 2");
  if (c.n < 1) throw ConfigError("problem.n: must be >= 1");
  if (c.p < 1) throw ConfigError("problem.p: must be >= 1");
  if (!(c.t0 < c.tf)) throw ConfigError("grid: need t0 < tf");
  if (c.steps < 1) throw ConfigError("grid.steps: must be >= 1");
  if (c.m_max < 1) throw ConfigError("solver.m_max: must be >= 1");
  if (c.tol < 0.0) throw ConfigError("solver.tol: must be >= 0");
  if (c.l < 1 || c.l > 3) throw ConfigError("solver.l: must be 1, 2 or 3");
  if (c.substeps < 1) throw ConfigError("solver.substeps: must be >= 1");
  if (c.probe_stride < 1) throw ConfigError("solver.probe_stride: must be >= 1");
  if (c.trunc_tol < 0.0) throw ConfigError("solver.trunc_tol: must be >= 0");
  if (c.dense_cap < 1) throw ConfigError("output.dense_cap: must be >= 1");
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(origin + ":" + std::to_string(e.line()) + ": " + e.message());
  }

  RunConfig config;
  const auto& fields = schema();
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw ConfigError(origin + ": key '" + section + "' outside of a section");
    }
    bool known_section = false;
    for (const Field& f : fields) known_section = known_section || section == f.section;
    if (!known_section) throw ConfigError(origin + ": unknown section [" + section + "]");
    for (const auto& [key, value] : body) {
      const std::string name = section + "." + key;
      const Field* match = nullptr;
      for (const Field& f : fields) {
        if (section == f.section && key == f.key) match = &f;
      }
      if (!match) throw ConfigError(origin + ": unknown key '" + name + "'");
      match->set(config, name, trim(value.data()));
      config.explicit_keys.push_back(name);
    }
  }
  validate(config);
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  RunConfig config = parse_config(buf.str(), path.string());
  // Relative bundle paths are resolved against the config file's directory.
  if (!config.bundle.empty() && std::filesystem::path(config.bundle).is_relative()) {
    config.bundle = (path.parent_path() / config.bundle).lexically_normal().string();
  }
  return config;
}

}  // namespace krymat::cli
