#include "krymat/dleexp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>

#include "krymat/egarnoldi.hpp"
#include "krymat/errors.hpp"
#include "krymat/garnoldi.hpp"
#include "krymat/limits.hpp"
#include "krymat/sparse.hpp"

namespace krymat {

DenseMat krylov_expm_action(const BlockBasis& basis, const DenseMat& hm, double beta, double s) {
  const Index m = hm.rows();
  if (hm.cols() != m || basis.blocks() != m) throw DimensionError("krylov_expm_action: H does not match the basis");
  const Vector coeff = expm(s * hm).col(0);
  return beta * kron_apply_vec(basis.row(), coeff);
}

GramTrajectory gram_trajectory(const DenseMat& hm, double beta, const TimeGrid& grid) {
  const Index m = hm.rows();
  if (hm.cols() != m) throw DimensionError("gram_trajectory: H must be square");
  Vector q = Vector::Zero(m);
  if (m > 0) q(0) = beta;
  GramTrajectory out{KernelTrajectorySym{grid, {}}, beta};
  out.kernel.samples.reserve(static_cast<std::size_t>(grid.nodes()));
  for (Index k = 0; k < grid.nodes(); ++k) {
    out.kernel.samples.push_back(k == 0 ? SymmetricMat::zero(m) : vanloan_gram(hm, q, grid.node(k) - grid.t0()));
  }
  return out;
}

double residual_bound_exp(double h_sub, const SymmetricMat& g) {
  if (g.order() == 0) return 0.0;
  return std::abs(h_sub) * g.matrix().row(g.order() - 1).norm();
}

double apriori_error_bound(double h_sub, double gbar_max, double mu2, double t, double t0) {
  const double dt = t - t0;
  const double scale = std::abs(h_sub) * gbar_max;
  if (std::abs(mu2) < 1e-14) return scale * dt;
  return scale * std::expm1(2.0 * dt * mu2) / (2.0 * mu2);
}

namespace {

// mu_2(A) exactly when A fits under the dense cap, otherwise a Gershgorin bound.
// The a-priori factor is increasing in mu, so an upper bound keeps it valid.
double lognorm_for_bound(const SparseMat& a) {
  if (a.rows() <= dense_cap()) return lognorm2(DenseMat(a));
  return lognorm2_upper_bound(a);
}

}  // namespace

std::pair<LowRankSolution, SolveReport> expo_dle_solve(const DLEProblem& problem, const TimeGrid& grid,
                                                       const ExpoOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const bool extended = options.variant == ExpoVariant::extended;
  SolveReport report;
  report.method = extended ? "expo-extended" : "expo-global";
  report.warnings = problem.validate();
  report.n = problem.n();
  report.p = problem.p();
  if (!problem.zero_initial()) {
    throw InvalidArgument("expo_dle_solve: requires X0 = 0; use the BDF solver (egadl) for nonzero X0");
  }
  if (options.m_max < 1) throw InvalidArgument("expo_dle_solve: m_max must be >= 1");
  if (options.probe_stride < 1) throw InvalidArgument("expo_dle_solve: probe_stride must be >= 1");
  const auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  const Index last = grid.nodes() - 1;
  if (problem.b.norm() == 0.0) {
    LowRankSolution sol{BlockBasis{}, KernelTrajectorySym{grid, {}}, {}};
    sol.kernel.samples.assign(static_cast<std::size_t>(grid.nodes()), SymmetricMat::zero(0));
    sol.factors.assign(static_cast<std::size_t>(grid.nodes()), LowRankFactor{DenseMat(0, 0), Vector()});
    for (Index k = 0; k <= last; ++k) report.rows.push_back({0, grid.node(k), 0.0, 0.0, 0});
    report.max_bound.push_back(0.0);
    report.converged = true;
    report.seconds = elapsed();
    return {std::move(sol), std::move(report)};
  }

  const double mu2 = lognorm_for_bound(problem.a);

  std::unique_ptr<GlobalArnoldi> global;
  std::unique_ptr<ExtGlobalArnoldi> ext;
  if (extended) {
    auto solver = std::make_shared<const LinearSolver>(problem.a);
    ext = std::make_unique<ExtGlobalArnoldi>(problem.a, solver, BlockRow::single(problem.b),
                                             options.arnoldi_tol < 0 ? 1e-12 : options.arnoldi_tol);
  } else {
    global = std::make_unique<GlobalArnoldi>(MatrixOperator::left_multiply(problem.a), problem.b,
                                             options.arnoldi_tol < 0 ? 1e-14 : options.arnoldi_tol);
  }

  BlockBasis basis;
  GramTrajectory gram{KernelTrajectorySym{grid, {}}, 0.0};

  auto run = [&]() -> bool {
    DenseMat hm;
    DenseMat coupling;  // maps the trailing rows of G to the residual block
    double beta = 0.0;
    Index m = 0;
    bool broke = false;
    if (extended) {
      const ExtHessenbergData hd = ext->hessenberg();
      basis = ext->basis();
      hm = hd.tm();
      coupling = hd.t_sub;
      beta = hd.r_init(0, 0);
      m = hd.m;
      broke = hd.breakdown;
    } else {
      const HessenbergData hd = global->hessenberg();
      basis = global->basis();
      hm = hd.hm();
      coupling = DenseMat::Constant(1, 1, hd.h_sub);
      beta = global->beta();
      m = hd.m;
      broke = hd.breakdown;
    }
    gram = gram_trajectory(hm, beta, grid);

    const Index w = coupling.rows();
    std::vector<double> bounds(static_cast<std::size_t>(grid.nodes()), 0.0);
    double gbar_max = 0.0;
    for (Index k = 0; k <= last; ++k) {
      const DenseMat& g = gram.kernel.samples[static_cast<std::size_t>(k)].matrix();
      const double gbar = (coupling * g.bottomRows(w)).norm();
      bounds[static_cast<std::size_t>(k)] = std::sqrt(2.0) * gbar;
      gbar_max = std::max(gbar_max, gbar);
    }
    double worst = 0.0;
    for (Index k = 0; k <= last; ++k) {
      if (k % options.probe_stride != 0 && k != last) continue;
      const double bound = bounds[static_cast<std::size_t>(k)];
      const double apriori = std::sqrt(2.0) * apriori_error_bound(1.0, gbar_max, mu2, grid.node(k), grid.t0());
      const SymmetricMat& g = gram.kernel.samples[static_cast<std::size_t>(k)];
      const Index rank = trunc_sym_factor(g, options.trunc_tol).rank() * problem.p();
      worst = std::max(worst, bound);
      report.rows.push_back({m, grid.node(k), bound, apriori, rank});
    }
    if (!std::isfinite(worst)) throw NumericError("expo_dle_solve: non-finite residual bound");
    report.max_bound.push_back(worst);
    report.m = m;
    report.breakdown = broke;
    return worst < options.tol;
  };

  if (extended && ext->breakdown()) {
    report.converged = run();
  } else if (extended) {
    while (ext->steps() < options.m_max && ext->extend()) {
      if (run()) {
        report.converged = true;
        break;
      }
      if (ext->breakdown()) break;
    }
  } else {
    while (global->steps() < options.m_max && global->extend()) {
      if (run()) {
        report.converged = true;
        break;
      }
      if (global->breakdown()) break;
    }
  }

  LowRankSolution sol{basis, std::move(gram.kernel), {}};
  sol.factors.reserve(sol.kernel.samples.size());
  for (const SymmetricMat& g : sol.kernel.samples) sol.factors.push_back(trunc_sym_factor(g, options.trunc_tol));
  report.basis_dim = basis.blocks();
  report.seconds = elapsed();
  return {std::move(sol), std::move(report)};
}

double perturbed_equation_check(const BlockRow& extended_row, const DenseMat& hm, double h_sub,
                                const DLEProblem& problem, const GramTrajectory& gram) {
  const Index m = hm.rows();
  const Index n = problem.n();
  require_within_cap(n, "perturbed_equation_check");
  if (extended_row.rows() != n || extended_row.blocks() < m) {
    throw DimensionError("perturbed_equation_check: basis does not match H");
  }
  const bool coupled = h_sub != 0.0;
  if (coupled && extended_row.blocks() < m + 1) {
    throw DimensionError("perturbed_equation_check: V_{m+1} is required when h_{m+1,m} != 0");
  }
  const BlockRow vm = extended_row.leading(m);
  const DenseMat a(problem.a);
  const DenseMat bbt = problem.b * problem.b.transpose();
  DenseMat e1 = DenseMat::Zero(m, m);
  e1(0, 0) = gram.beta * gram.beta;

  double worst = 0.0;
  for (const SymmetricMat& gs : gram.kernel.samples) {
    const DenseMat& g = gs.matrix();
    const DenseMat gdot = hm * g + g * hm.transpose() + e1;
    const DenseMat x = kron_apply(vm, g).data() * vm.data().transpose();
    const DenseMat xdot = kron_apply(vm, gdot).data() * vm.data().transpose();
    DenseMat forcing = bbt;
    if (coupled) {
      // L = h V_{m+1} (e_m^T G (x) I_p) V_m^T
      const DenseMat last_row = g.row(m - 1);
      const DenseMat l = h_sub * extended_row.block(m) *
                         kron_apply(vm, last_row.transpose()).data().transpose();
      forcing -= l + l.transpose();
    }
    const DenseMat defect = xdot - a * x - x * a.transpose() - forcing;
    worst = std::max(worst, defect.norm());
  }
  return worst;
}

}  // namespace krymat
