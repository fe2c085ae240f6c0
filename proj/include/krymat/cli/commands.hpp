#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "krymat/cli/config.hpp"

namespace krymat::cli {

/// Runs one configuration and writes report.csv, summary.txt and (optionally)
/// factors/ into `out_dir`. Returns the process exit code.
int run_command(RunConfig config, const std::filesystem::path& out_dir, std::ostream& out, std::ostream& err);

struct GenerateParams {
  std::string kind;  ///< laplacian2d | random-stable | sylvester-q2
  std::int64_t n0 = 4;
  std::int64_t n = 50;
  std::int64_t p = 1;
  std::uint64_t seed = 1;
  bool symmetric = false;
  double t0 = 0.0;
  double tf = 1.0;
};

/// Writes a problem bundle (Matrix Market members plus manifest.json).
int generate_command(const GenerateParams& params, const std::filesystem::path& out_dir, std::ostream& out,
                     std::ostream& err);

/// Runs several configurations on up to `threads` workers, each into
/// out_dir/<config stem>. Returns the largest exit code.
int sweep_command(const std::vector<std::filesystem::path>& configs, const std::filesystem::path& out_dir,
                  int threads, std::optional<std::uint64_t> seed, std::ostream& out, std::ostream& err);

/// Loads a config file and applies command-line overrides. Errors are reported
/// on `err`; the return value is empty on failure and `code` holds the exit code.
std::optional<RunConfig> load_with_overrides(const std::filesystem::path& path, std::optional<std::uint64_t> seed,
                                             std::ostream& err, int& code);

}  // namespace krymat::cli
