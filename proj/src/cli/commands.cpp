#include "krymat/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>
#include <variant>

#include "krymat/bundle.hpp"
#include "krymat/dlebdf.hpp"
#include "krymat/dleexp.hpp"
#include "krymat/dsylv.hpp"
#include "krymat/generators.hpp"
#include "krymat/limits.hpp"
#include "krymat/matrix_market.hpp"
#include "krymat/oracle.hpp"

namespace krymat::cli {
namespace fs = std::filesystem;

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool has_key(const RunConfig& c, const std::string& key) {
  return std::find(c.explicit_keys.begin(), c.explicit_keys.end(), key) != c.explicit_keys.end();
}

using Problem = std::variant<DLEProblem, GenSylvesterProblem>;

Problem build_problem(const RunConfig& c) {
  if (c.kind == "laplacian2d") {
    return gen_laplacian_dle(c.n0, c.p, c.seed, c.t0, c.tf);
  }
  if (c.kind == "random-stable") {
    DLEProblem p;
    p.a = c.symmetric ? gen_random_stable_symmetric(c.n, c.seed) : gen_random_stable(c.n, c.seed);
    Rng rng(c.seed + 1);
    p.b = rng.normal_matrix(c.n, c.p);
    p.z0 = DenseMat(c.n, 0);
    p.t0 = c.t0;
    p.tf = c.tf;
    return p;
  }
  if (c.kind == "sylvester-q2") {
    GenSylvesterProblem p = gen_sylvester_q2(c.n, c.p, c.seed);
    p.t0 = c.t0;
    p.tf = c.tf;
    return p;
  }
  BundleProblem loaded = read_bundle(c.bundle);
  return std::visit(
      [&](auto prob) -> Problem {
        if (has_key(c, "grid.t0")) prob.t0 = c.t0;
        if (has_key(c, "grid.tf")) prob.tf = c.tf;
        return prob;
      },
      std::move(loaded));
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write '" + path.string() + "'");
  return f;
}

void write_report_csv(const fs::path& path, const SolveReport& report) {
  const bool apriori = report.method.rfind("expo", 0) == 0;
  const bool rank = report.method == "egadl";
  std::ofstream f = open_out(path);
  f << "m,t,residual_bound";
  if (apriori) f << ",apriori_bound";
  if (rank) f << ",rank";
  f << '\n';
  for (const ReportRow& r : report.rows) {
    f << r.m << ',' << num(r.t) << ',' << num(r.residual_bound);
    if (apriori) f << ',' << num(r.apriori_bound);
    if (rank) f << ',' << r.rank;
    f << '\n';
  }
  if (!f) throw IoError("write failed for '" + path.string() + "'");
}

std::string node_name(Index k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "node_%04ld", static_cast<long>(k));
  return buf;
}

void write_factors(const fs::path& dir, const LowRankSolution& sol) {
  ensure_dir(dir);
  for (Index k = 0; k < static_cast<Index>(sol.factors.size()); ++k) {
    if (sol.basis.blocks() == 0) continue;
    write_matrix_market(dir / (node_name(k) + ".mtx"), sol.factor(k));
    write_matrix_market(dir / (node_name(k) + "_signature.mtx"), DenseMat(sol.factor_signature(k)));
  }
}

void write_galerkin_nodes(const fs::path& dir, const GalerkinSolution& sol) {
  ensure_dir(dir);
  for (Index k = 0; k < sol.nodes(); ++k) write_matrix_market(dir / (node_name(k) + ".mtx"), sol.at(k));
}

double max_relative_deviation(const std::vector<DenseMat>& approx, const std::vector<DenseMat>& exact) {
  double worst = 0.0;
  for (std::size_t k = 0; k < exact.size(); ++k) {
    const double ref = exact[k].norm();
    const double diff = (approx[k] - exact[k]).norm();
    worst = std::max(worst, ref > 0.0 ? diff / ref : diff);
  }
  return worst;
}

}  // namespace

int run_command(RunConfig config, const fs::path& out_dir, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  try {
    validate(config);
    if (has_key(config, "output.dense_cap")) set_dense_cap(config.dense_cap);
    const Problem problem = build_problem(config);
    const std::string method = config.method == "oracle-check" ? config.target : config.method;
    const bool check = config.method == "oracle-check";

    ensure_dir(out_dir);
    SolveReport report;
    double deviation = std::nan("");

    if (const auto* sylv = std::get_if<GenSylvesterProblem>(&problem)) {
      if (method != "galerkin") throw ConfigError("a Sylvester problem requires solver.method = galerkin");
      const TimeGrid grid(sylv->t0, sylv->tf, config.steps);
      GalerkinOptions opt;
      opt.m_max = config.m_max;
      opt.eps = config.tol;
      if (config.arnoldi_tol >= 0) opt.arnoldi_tol = config.arnoldi_tol;
      auto [sol, rep] = galerkin_solve(*sylv, grid, opt);
      report = std::move(rep);
      if (config.factors) write_galerkin_nodes(out_dir / "factors", sol);
      if (check) {
        const auto exact = dense_dme_solve(*sylv, grid);
        std::vector<DenseMat> approx;
        for (Index k = 0; k < sol.nodes(); ++k) approx.push_back(sol.at(k));
        deviation = max_relative_deviation(approx, exact);
      }
    } else {
      const auto& dle = std::get<DLEProblem>(problem);
      if (method == "galerkin") throw ConfigError("a Lyapunov problem requires egadl or expo-*");
      const TimeGrid grid(dle.t0, dle.tf, config.steps);
      std::optional<LowRankSolution> sol;
      if (method == "egadl") {
        EgadlOptions opt;
        opt.m_max = config.m_max;
        opt.tol = config.tol;
        opt.l = config.l;
        opt.substeps = config.substeps;
        opt.probe_stride = config.probe_stride;
        opt.trunc_tol = config.trunc_tol;
        if (config.arnoldi_tol >= 0) opt.arnoldi_tol = config.arnoldi_tol;
        auto [s, rep] = egadl_solve(dle, grid, opt);
        sol.emplace(std::move(s));
        report = std::move(rep);
      } else {
        ExpoOptions opt;
        opt.m_max = config.m_max;
        opt.tol = config.tol;
        opt.variant = method == "expo-extended" ? ExpoVariant::extended : ExpoVariant::global;
        opt.probe_stride = config.probe_stride;
        opt.trunc_tol = config.trunc_tol;
        opt.arnoldi_tol = config.arnoldi_tol;
        auto [s, rep] = expo_dle_solve(dle, grid, opt);
        sol.emplace(std::move(s));
        report = std::move(rep);
      }
      if (config.factors) write_factors(out_dir / "factors", *sol);
      if (check) {
        const auto exact = dense_dle_exact(dle, grid);
        std::vector<DenseMat> approx;
        for (Index k = 0; k < sol->nodes(); ++k) {
          approx.push_back(sol->basis.blocks() == 0 ? DenseMat::Zero(dle.n(), dle.n()) : sol->dense(k));
        }
        deviation = max_relative_deviation(approx, exact);
      }
    }

    write_report_csv(out_dir / "report.csv", report);

    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ofstream summary = open_out(out_dir / "summary.txt");
    summary << "method = " << config.method << '\n';
    if (check) summary << "target = " << method << '\n';
    summary << "n = " << report.n << '\n'
            << "p = " << report.p << '\n'
            << "m = " << report.m << '\n'
            << "basis_blocks = " << report.basis_dim << '\n'
            << "converged = " << (report.converged ? "true" : "false") << '\n'
            << "breakdown = " << (report.breakdown ? "true" : "false") << '\n'
            << "final_max_bound = " << (report.max_bound.empty() ? std::string("nan") : num(report.max_bound.back()))
            << '\n';
    if (check) summary << "max_deviation = " << num(deviation) << '\n';
    summary << "wall_time_s = " << num(wall) << '\n';
    for (const std::string& w : report.warnings) summary << "warning = " << w << '\n';
    summary << "\n[settings]\n";
    for (const auto& [key, value] : config.settings()) {
      summary << key << " = " << value << (has_key(config, key) ? "" : "  # default") << '\n';
    }
    if (!summary) throw IoError("write failed for summary.txt");

    out << report.method << ": m = " << report.m << ", converged = " << (report.converged ? "yes" : "no")
        << ", final max bound = " << (report.max_bound.empty() ? std::string("nan") : num(report.max_bound.back()))
        << '\n';
    if (check) out << "max deviation from oracle = " << num(deviation) << '\n';
    for (const std::string& w : report.warnings) err << "warning: " << w << '\n';

    if (!report.converged) {
      err << "not converged: tolerance " << num(config.tol) << " not reached within m_max = " << config.m_max << '\n';
      return static_cast<int>(ExitCode::not_converged);
    }
    return static_cast<int>(ExitCode::ok);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::config);
  } catch (const CapExceededError& e) {
    err << "config error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::config);
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::io);
  } catch (const ParseError& e) {
    err << "i/o error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::io);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::failure);
  }
}

int generate_command(const GenerateParams& params, const fs::path& out_dir, std::ostream& out, std::ostream& err) {
  try {
    if (params.p < 1) throw ConfigError("--p must be >= 1");
    if (!(params.t0 < params.tf)) throw ConfigError("need t0 < tf");
    if (params.kind == "laplacian2d") {
      if (params.n0 < 2) throw ConfigError("--n0 must be >= 2");
      write_bundle(out_dir, gen_laplacian_dle(params.n0, params.p, params.seed, params.t0, params.tf));
    } else if (params.kind == "random-stable") {
      if (params.n < 1) throw ConfigError("--n must be >= 1");
      RunConfig c;
      c.kind = params.kind;
      c.n = params.n;
      c.p = params.p;
      c.seed = params.seed;
      c.symmetric = params.symmetric;
      c.t0 = params.t0;
      c.tf = params.tf;
      write_bundle(out_dir, std::get<DLEProblem>(build_problem(c)));
    } else if (params.kind == "sylvester-q2") {
      if (params.n < 1) throw ConfigError("--n must be >= 1");
      GenSylvesterProblem p = gen_sylvester_q2(params.n, params.p, params.seed);
      p.t0 = params.t0;
      p.tf = params.tf;
      write_bundle(out_dir, p);
    } else {
      throw ConfigError("unknown kind '" + params.kind + "' (laplacian2d, random-stable, sylvester-q2)");
    }
    out << "wrote " << params.kind << " bundle to " << out_dir.string() << '\n';
    return static_cast<int>(ExitCode::ok);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::config);
  } catch (const InvalidArgument& e) {
    err << "config error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::config);
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::io);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::failure);
  }
}

std::optional<RunConfig> load_with_overrides(const fs::path& path, std::optional<std::uint64_t> seed,
                                             std::ostream& err, int& code) {
  try {
    RunConfig config = load_config(path);
    if (seed) {
      config.seed = *seed;
      config.explicit_keys.push_back("problem.seed");
    }
    code = 0;
    return config;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    code = static_cast<int>(ExitCode::config);
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    code = static_cast<int>(ExitCode::io);
  }
  return std::nullopt;
}

int sweep_command(const std::vector<fs::path>& configs, const fs::path& out_dir, int threads,
                  std::optional<std::uint64_t> seed, std::ostream& out, std::ostream& err) {
  struct Job {
    fs::path config;
    fs::path dir;
    int code = 0;
    std::string log;
  };
  std::vector<Job> jobs;
  std::map<std::string, int> seen;
  for (const fs::path& c : configs) {
    std::string stem = c.stem().string();
    const int count = seen[stem]++;
    if (count > 0) stem += "_" + std::to_string(count);
    jobs.push_back({c, out_dir / stem, 0, {}});
  }

  // The dense cap is process-wide; use the largest cap any config asks for.
  std::vector<std::optional<RunConfig>> loaded;
  for (Job& job : jobs) {
    std::ostringstream e;
    loaded.push_back(load_with_overrides(job.config, seed, e, job.code));
    job.log = e.str();
  }
  Index cap = 0;
  for (const auto& c : loaded) {
    if (c && std::find(c->explicit_keys.begin(), c->explicit_keys.end(), "output.dense_cap") != c->explicit_keys.end()) {
      cap = std::max<Index>(cap, c->dense_cap);
    }
  }
  if (cap > 0) set_dense_cap(cap);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      if (!loaded[i]) continue;
      RunConfig c = *loaded[i];
      c.explicit_keys.erase(std::remove(c.explicit_keys.begin(), c.explicit_keys.end(), "output.dense_cap"),
                            c.explicit_keys.end());
      std::ostringstream o;
      jobs[i].code = run_command(std::move(c), jobs[i].dir, o, o);
      jobs[i].log += o.str();
    }
  };
  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  int worst = 0;
  for (const Job& job : jobs) {
    out << "[" << job.config.string() << "] exit " << job.code << '\n' << job.log;
    worst = std::max(worst, job.code);
  }
  if (worst != 0) err << "sweep: at least one run failed\n";
  return worst;
}

}  // namespace krymat::cli
