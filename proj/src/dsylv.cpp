#include "krymat/dsylv.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "krymat/errors.hpp"
#include "krymat/smallmat.hpp"

namespace krymat {

Vector project_rhs(const BlockBasis& basis, const DenseMat& r0) {
  if (r0.rows() != basis.rows() || r0.cols() != basis.block_width()) {
    throw DimensionError("project_rhs: R0 does not match the basis blocks");
  }
  const DenseMat d = diamond(basis.row(), BlockRow::single(r0));
  return -d.col(0);
}

KernelTrajectoryVec integrate_projected(const DenseMat& hm, const Vector& cm, const Vector& y0,
                                        const TimeGrid& grid) {
  const Index m = hm.rows();
  if (hm.cols() != m || cm.size() != m || y0.size() != m) {
    throw DimensionError("integrate_projected: inconsistent sizes");
  }
  const double h = grid.step();
  const auto [e, phi_c] = expm_and_phi1_action(h * hm, cm);
  const Vector step_c = h * phi_c;

  KernelTrajectoryVec out{grid, {}};
  out.samples.reserve(static_cast<std::size_t>(grid.nodes()));
  Vector y = y0;
  out.samples.push_back(y);
  for (Index k = 0; k < grid.steps(); ++k) {
    y = e * y + step_c;
    out.samples.push_back(y);
  }
  return out;
}

double residual_norm(const HessenbergData& h, const Vector& y) {
  if (y.size() != h.m) throw DimensionError("residual_norm: y has the wrong length");
  if (h.m == 0) return 0.0;
  return std::abs(h.h_sub) * std::abs(y(h.m - 1));
}

std::pair<GalerkinSolution, SolveReport> galerkin_solve(const GenSylvesterProblem& problem, const TimeGrid& grid,
                                                        const GalerkinOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  SolveReport report;
  report.method = "galerkin";
  report.warnings = problem.validate();
  report.n = problem.n();
  report.p = problem.p();
  if (options.m_max < 1) throw InvalidArgument("galerkin_solve: m_max must be >= 1");

  const DenseMat r0 = -gsylv_apply(problem, problem.x0) - problem.c;
  const auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  if (r0.norm() == 0.0) {
    // X0 already solves the equation.
    GalerkinSolution sol{BlockBasis{}, KernelTrajectoryVec{grid, {}}, problem.x0};
    sol.kernel.samples.assign(static_cast<std::size_t>(grid.nodes()), Vector());
    for (Index k = 0; k < grid.nodes(); ++k) report.rows.push_back({0, grid.node(k), 0.0});
    report.max_bound.push_back(0.0);
    report.converged = true;
    report.seconds = elapsed();
    return {std::move(sol), std::move(report)};
  }

  const MatrixOperator op{problem.n(), problem.p(), [&problem](const DenseMat& x) { return gsylv_apply(problem, x); }};
  GlobalArnoldi process(op, r0, options.arnoldi_tol);
  const double beta = process.beta();

  KernelTrajectoryVec kernel{grid, {}};
  while (process.steps() < options.m_max && process.extend()) {
    const HessenbergData hd = process.hessenberg();
    const Index m = hd.m;
    Vector cm = Vector::Zero(m);
    cm(0) = -beta;
    kernel = integrate_projected(hd.hm(), cm, Vector::Zero(m), grid);

    double worst = 0.0;
    for (Index k = 0; k < grid.nodes(); ++k) {
      const double r = residual_norm(hd, kernel.samples[static_cast<std::size_t>(k)]);
      worst = std::max(worst, r);
      report.rows.push_back({m, grid.node(k), r});
    }
    report.max_bound.push_back(worst);
    report.m = m;
    report.breakdown = hd.breakdown;
    if (!std::isfinite(worst)) throw NumericError("galerkin_solve: non-finite residual");
    if (worst < options.eps) {
      report.converged = true;
      break;
    }
  }

  GalerkinSolution sol{process.basis(), std::move(kernel), problem.x0};
  report.basis_dim = sol.basis.blocks();
  report.seconds = elapsed();
  return {std::move(sol), std::move(report)};
}

}  // namespace krymat
