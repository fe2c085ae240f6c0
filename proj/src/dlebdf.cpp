#include "krymat/dlebdf.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <memory>

#include <Eigen/Eigenvalues>

#include "krymat/egarnoldi.hpp"
#include "krymat/errors.hpp"
#include "krymat/sparse.hpp"

namespace krymat {

BDFScheme bdf_coefficients(int l) {
  switch (l) {
    case 1:
      return {1, 1.0, {1.0}};
    case 2:
      return {2, 2.0 / 3.0, {4.0 / 3.0, -1.0 / 3.0}};
    case 3:
      return {3, 6.0 / 11.0, {18.0 / 11.0, -9.0 / 11.0, 2.0 / 11.0}};
    default:
      throw UnsupportedError("bdf_coefficients: only l = 1, 2, 3 are supported");
  }
}

SymmetricMat bdf_step(const DenseMat& tm, const Vector& bm, const std::vector<SymmetricMat>& prev, double h,
                      const BDFScheme& scheme) {
  const Index k = tm.rows();
  if (tm.cols() != k || bm.size() != k) throw DimensionError("bdf_step: inconsistent sizes");
  if (static_cast<int>(prev.size()) < scheme.l) throw InvalidArgument("bdf_step: not enough previous values");
  const double hb = h * scheme.beta;
  DenseMat q = hb * bm * bm.transpose();
  for (int i = 0; i < scheme.l; ++i) {
    const SymmetricMat& y = prev[static_cast<std::size_t>(i)];
    if (y.order() != k) throw DimensionError("bdf_step: previous value has the wrong order");
    q += scheme.alpha[static_cast<std::size_t>(i)] * y.matrix();
  }
  const DenseMat t = hb * tm - 0.5 * DenseMat::Identity(k, k);
  try {
    return lyap_solve(t, SymmetricMat::symmetric_part(q));
  } catch (const IllPosedError& e) {
    throw StepFailure(std::string("bdf_step: singular Lyapunov operator; reduce the step size (") + e.what() + ")");
  }
}

namespace {

// BDF marching in Schur coordinates, Y = U Yt U^T, S = U^T T U.
class SchurMarcher {
 public:
  SchurMarcher(const DenseMat& tm, const Vector& bm) {
    Eigen::RealSchur<DenseMat> schur(tm);
    if (schur.info() != Eigen::Success) throw NumericError("bdf_integrate: Schur decomposition failed");
    u_ = schur.matrixU();
    s_ = schur.matrixT();
    const Vector b = u_.transpose() * bm;
    bbt_ = b * b.transpose();
  }

  DenseMat to_schur(const DenseMat& y) const { return u_.transpose() * y * u_; }
  SymmetricMat from_schur(const DenseMat& yt) const {
    return SymmetricMat::symmetric_part(u_ * yt * u_.transpose());
  }

  /// Prepares the step operator for (h, scheme).
  std::shared_ptr<const QuasiTriangularLyapunov> op(double h, const BDFScheme& scheme) const {
    const Index k = s_.rows();
    try {
      return std::make_shared<QuasiTriangularLyapunov>(h * scheme.beta * s_ - 0.5 * DenseMat::Identity(k, k));
    } catch (const IllPosedError& e) {
      throw StepFailure(std::string("bdf_integrate: singular Lyapunov operator; reduce the step size (") + e.what() +
                        ")");
    }
  }

  /// history.front() is the most recent value.
  DenseMat step(const QuasiTriangularLyapunov& solver, double h, const BDFScheme& scheme,
                const std::deque<DenseMat>& history) const {
    DenseMat q = (h * scheme.beta) * bbt_;
    for (int i = 0; i < scheme.l; ++i) q += scheme.alpha[static_cast<std::size_t>(i)] * history[static_cast<std::size_t>(i)];
    return solver.solve(q);
  }

 private:
  DenseMat u_;
  DenseMat s_;
  DenseMat bbt_;
};

}  // namespace

KernelTrajectorySym bdf_integrate(const DenseMat& tm, const Vector& bm, const SymmetricMat& y0, const TimeGrid& grid,
                                  int l, const BdfOptions& options) {
  const Index k = tm.rows();
  if (tm.cols() != k || bm.size() != k || y0.order() != k) throw DimensionError("bdf_integrate: inconsistent sizes");
  if (options.substeps < 1) throw InvalidArgument("bdf_integrate: substeps must be >= 1");
  const BDFScheme main = bdf_coefficients(l);

  KernelTrajectorySym out{grid, {}};
  out.samples.reserve(static_cast<std::size_t>(grid.nodes()));
  out.samples.push_back(y0);
  if (k == 0) {
    for (Index i = 1; i < grid.nodes(); ++i) out.samples.push_back(y0);
    return out;
  }

  const SchurMarcher marcher(tm, bm);
  const double d = grid.step() / static_cast<double>(options.substeps);
  const Index total = grid.steps() * options.substeps;

  std::deque<DenseMat> history;  // most recent first, at internal step size d
  history.push_front(marcher.to_schur(y0.matrix()));
  Index done = 0;

  auto record = [&](Index step_index) {
    if (step_index % options.substeps == 0) out.samples.push_back(marcher.from_schur(history.front()));
  };

  const BDFScheme bdf1 = bdf_coefficients(1);
  const BDFScheme bdf2 = bdf_coefficients(2);

  if (l == 2 && total >= 1) {
    const auto op1 = marcher.op(d, bdf1);
    history.push_front(marcher.step(*op1, d, bdf1, history));
    record(++done);
  } else if (l == 3 && total >= 1) {
    const Index warm = std::min<Index>(2, total);
    const Index refine =
        std::clamp<Index>(static_cast<Index>(std::ceil(1.0 / d)), 1, options.max_startup_refinement);
    const double delta = d / static_cast<double>(refine);
    const auto micro1 = marcher.op(delta, bdf1);
    const auto micro2 = marcher.op(delta, bdf2);
    std::deque<DenseMat> fine;
    fine.push_front(history.front());
    Index micro = 0;
    for (Index w = 0; w < warm; ++w) {
      for (Index i = 0; i < refine; ++i, ++micro) {
        DenseMat next = micro == 0 ? marcher.step(*micro1, delta, bdf1, fine) : marcher.step(*micro2, delta, bdf2, fine);
        fine.push_front(std::move(next));
        if (fine.size() > 2) fine.pop_back();
      }
      history.push_front(fine.front());
      record(++done);
    }
  }

  if (done < total) {
    const auto op = marcher.op(d, main);
    for (; done < total;) {
      DenseMat next = marcher.step(*op, d, main, history);
      history.push_front(std::move(next));
      if (static_cast<int>(history.size()) > main.l) history.pop_back();
      record(++done);
    }
  }
  return out;
}

double residual_bound_bdf(const DenseMat& t_sub, const SymmetricMat& y) {
  const Index w = t_sub.rows();
  if (t_sub.cols() != w || y.order() < w) throw DimensionError("residual_bound_bdf: inconsistent sizes");
  return std::sqrt(2.0) * (t_sub * y.matrix().bottomRows(w)).norm();
}

namespace {

// Width-p column blocks [B, Z0_1, Z0_2, ...]; the last Z0 block is zero padded.
BlockRow seed_blocks(const DLEProblem& problem, bool with_b) {
  const Index n = problem.n();
  const Index p = problem.p();
  const Index r0 = problem.zero_initial() ? 0 : problem.z0.cols();
  const Index zb = (r0 + p - 1) / p;
  DenseMat seeds = DenseMat::Zero(n, (zb + (with_b ? 1 : 0)) * p);
  Index off = 0;
  if (with_b) {
    seeds.leftCols(p) = problem.b;
    off = p;
  }
  if (r0 > 0) seeds.middleCols(off, r0) = problem.z0;
  return BlockRow(std::move(seeds), p);
}

}  // namespace

std::pair<LowRankSolution, SolveReport> egadl_solve(const DLEProblem& problem, const TimeGrid& grid,
                                                    const EgadlOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  SolveReport report;
  report.method = "egadl";
  report.warnings = problem.validate();
  report.n = problem.n();
  report.p = problem.p();
  if (options.m_max < 1) throw InvalidArgument("egadl_solve: m_max must be >= 1");
  if (options.probe_stride < 1) throw InvalidArgument("egadl_solve: probe_stride must be >= 1");
  const auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  const bool b_zero = problem.b.norm() == 0.0;
  if (b_zero && problem.zero_initial()) {
    LowRankSolution sol{BlockBasis{}, KernelTrajectorySym{grid, {}}, {}};
    sol.kernel.samples.assign(static_cast<std::size_t>(grid.nodes()), SymmetricMat::zero(0));
    sol.factors.assign(static_cast<std::size_t>(grid.nodes()), LowRankFactor{DenseMat(0, 0), Vector()});
    for (Index k = 0; k < grid.nodes(); ++k) report.rows.push_back({0, grid.node(k), 0.0, std::nan(""), 0});
    report.max_bound.push_back(0.0);
    report.converged = true;
    report.seconds = elapsed();
    return {std::move(sol), std::move(report)};
  }

  auto solver = std::make_shared<const LinearSolver>(problem.a);
  const BlockRow seeds = seed_blocks(problem, !b_zero);
  ExtGlobalArnoldi process(problem.a, solver, seeds, options.arnoldi_tol);

  BdfOptions bdf;
  bdf.substeps = options.substeps;

  KernelTrajectorySym kernel{grid, {}};
  BlockBasis basis;
  const Index last = grid.nodes() - 1;

  auto run = [&]() -> bool {
    basis = process.basis();
    const ExtHessenbergData hd = process.hessenberg();
    const Index order = hd.order();
    const Index m = hd.m;

    // B lies in the first basis block, so this is r_11 e_1 up to roundoff.
    const Vector bm = b_zero ? Vector::Zero(order).eval()
                             : diamond(basis.row(), BlockRow::single(problem.b)).col(0).eval();
    DenseMat y0 = DenseMat::Zero(order, order);
    const Index first_z = b_zero ? 0 : 1;
    for (Index c = first_z; c < seeds.blocks(); ++c) {
      const Vector z = diamond(basis.row(), BlockRow::single(seeds.block(c))).col(0);
      y0 += z * z.transpose();
    }
    kernel = bdf_integrate(hd.tm(), bm, SymmetricMat::symmetric_part(y0), grid, options.l, bdf);

    double worst = 0.0;
    for (Index k = 0; k <= last; ++k) {
      if (k % options.probe_stride != 0 && k != last) continue;
      const SymmetricMat& y = kernel.samples[static_cast<std::size_t>(k)];
      const double bound = residual_bound_bdf(hd.t_sub, y);
      const Index rank = trunc_sym_factor(y, options.trunc_tol).rank() * problem.p();
      worst = std::max(worst, bound);
      report.rows.push_back({m, grid.node(k), bound, std::nan(""), rank});
    }
    if (!std::isfinite(worst)) throw NumericError("egadl_solve: non-finite residual bound");
    report.max_bound.push_back(worst);
    report.m = m;
    report.breakdown = hd.breakdown;
    return worst < options.tol;
  };

  if (process.breakdown()) {
    report.converged = run();
  } else {
    while (process.steps() < options.m_max && process.extend()) {
      if (run()) {
        report.converged = true;
        break;
      }
      if (process.breakdown()) break;
    }
  }

  LowRankSolution sol{basis, std::move(kernel), {}};
  sol.factors.reserve(sol.kernel.samples.size());
  for (const SymmetricMat& y : sol.kernel.samples) sol.factors.push_back(trunc_sym_factor(y, options.trunc_tol));
  report.basis_dim = basis.blocks();
  report.seconds = elapsed();
  return {std::move(sol), std::move(report)};
}

}  // namespace krymat
