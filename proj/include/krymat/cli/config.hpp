#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "krymat/errors.hpp"

namespace krymat::cli {

/// Schema violation in a run configuration (maps to exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class ExitCode : int { ok = 0, failure = 1, config = 2, not_converged = 3, io = 4 };

/// Parsed run configuration. Every field has a default; the `[section] key = value`
/// text format is documented in the README and configs/.
struct RunConfig {
  // [problem]
  std::string kind = "laplacian2d";  ///< laplacian2d | random-stable | sylvester-q2 | bundle
  std::int64_t n0 = 10;
  std::int64_t n = 100;
  std::int64_t p = 2;
  std::uint64_t seed = 1;
  bool symmetric = false;
  std::string bundle;               ///< directory, for kind = bundle
  // [grid]
  double t0 = 0.0;
  double tf = 1.0;
  std::int64_t steps = 20;
  // [solver]
  std::string method = "egadl";     ///< galerkin | egadl | expo-global | expo-extended | oracle-check
  std::string target = "egadl";     ///< method checked by oracle-check
  std::int64_t m_max = 30;
  double tol = 1e-8;
  int l = 2;
  std::int64_t substeps = 1;
  std::int64_t probe_stride = 1;
  double arnoldi_tol = -1.0;        ///< negative selects the method's default
  double trunc_tol = 1e-12;
  // [output]
  bool factors = false;
  std::int64_t dense_cap = 2000;

  /// Which keys were set explicitly (for the run summary).
  std::vector<std::string> explicit_keys;

  /// "section.key = value" for every setting, in schema order.
  std::vector<std::pair<std::string, std::string>> settings() const;
};

/// Parses an INI file. Throws ConfigError on unknown sections or keys, malformed
/// values or out-of-range settings, and IoError when the file cannot be read.
RunConfig load_config(const std::filesystem::path& path);

/// Same, from text (`origin` is used in messages).
RunConfig parse_config(const std::string& text, const std::string& origin = "<config>");

/// Checks ranges and cross-field consistency. Throws ConfigError.
void validate(const RunConfig& config);

}  // namespace krymat::cli
