// krymat: command-line driver for the differential matrix equation solvers.
//
//   krymat run      --config run.ini [--out DIR] [--seed S]
//   krymat generate --kind laplacian2d|random-stable|sylvester-q2 [params] --out DIR
//   krymat sweep    --config a.ini --config b.ini ... [--out DIR] [--threads T] [--seed S]
//
// Exit codes: 0 success, 1 solver failure, 2 configuration error,
// 3 tolerance not reached, 4 I/O error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "krymat/cli/commands.hpp"

int main(int argc, char** argv) {
  namespace kc = krymat::cli;
  CLI::App app{"krymat: Krylov solvers for large differential Sylvester and Lyapunov equations"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  int threads = 1;

  auto* run = app.add_subcommand("run", "Solve the problem described by a config file");
  run->add_option("--config", config_path, "INI configuration file")->required();
  run->add_option("--out", out_dir, "Output directory")->capture_default_str();
  run->add_option("--seed", seed, "Override problem.seed");
  run->add_option("--threads", threads, "Worker threads (a single run is sequential)");

  kc::GenerateParams gen;
  auto* generate = app.add_subcommand("generate", "Write a problem bundle");
  generate->add_option("--kind", gen.kind, "laplacian2d, random-stable or sylvester-q2")->required();
  generate->add_option("--n0", gen.n0, "Interior points per side (laplacian2d)")->capture_default_str();
  generate->add_option("--n", gen.n, "Order of A (random-stable, sylvester-q2)")->capture_default_str();
  generate->add_option("--p", gen.p, "Columns of B or C")->capture_default_str();
  generate->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  generate->add_flag("--symmetric", gen.symmetric, "Symmetric A (random-stable)");
  generate->add_option("--t0", gen.t0, "Initial time")->capture_default_str();
  generate->add_option("--tf", gen.tf, "Final time")->capture_default_str();
  generate->add_option("--out", out_dir, "Bundle directory")->required();

  std::vector<std::string> sweep_configs;
  auto* sweep = app.add_subcommand("sweep", "Run several configs, each into its own directory");
  sweep->add_option("--config", sweep_configs, "Config files")->required();
  sweep->add_option("--out", out_dir, "Parent output directory")->capture_default_str();
  sweep->add_option("--threads", threads, "Parallel workers")->capture_default_str()->check(CLI::PositiveNumber);
  sweep->add_option("--seed", seed, "Override problem.seed in every config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(kc::ExitCode::config);
  }

  if (*run) {
    int code = 0;
    auto config = kc::load_with_overrides(config_path, seed, std::cerr, code);
    if (!config) return code;
    return kc::run_command(std::move(*config), out_dir, std::cout, std::cerr);
  }
  if (*generate) return kc::generate_command(gen, out_dir, std::cout, std::cerr);
  std::vector<std::filesystem::path> paths(sweep_configs.begin(), sweep_configs.end());
  return kc::sweep_command(paths, out_dir, threads, seed, std::cout, std::cerr);
}
