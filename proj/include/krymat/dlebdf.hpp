#pragma once

#include <utility>
#include <vector>

#include "krymat/blockmat.hpp"
#include "krymat/problems.hpp"
#include "krymat/smallmat.hpp"
#include "krymat/solution.hpp"
#include "krymat/time_grid.hpp"

namespace krymat {

/// l-step BDF: Y_{k+1} = sum_i alpha_i Y_{k-i} + h beta F(Y_{k+1}).
struct BDFScheme {
  int l = 1;
  double beta = 1.0;
  std::vector<double> alpha;
};

/// Coefficients for l = 1, 2, 3. Throws UnsupportedError otherwise.
BDFScheme bdf_coefficients(int l);

/// One implicit step for Y' = T Y + Y T^T + b b^T: solves
///   (h beta T - I/2) Y + Y (h beta T - I/2)^T + h beta b b^T + sum_i alpha_i prev[i] = 0,
/// where prev[0] is the most recent value. Throws StepFailure when the
/// Lyapunov operator is singular.
SymmetricMat bdf_step(const DenseMat& tm, const Vector& bm, const std::vector<SymmetricMat>& prev, double h,
                      const BDFScheme& scheme);

struct BdfOptions {
  /// Internal steps per grid interval. Results are still reported at grid nodes.
  Index substeps = 1;
  /// Cap on the number of micro-steps per internal step used to start l = 3.
  Index max_startup_refinement = 4096;
};

/// Integrates the projected equation over the grid with the l-step BDF scheme.
///
/// Startup: for l = 2 the first internal step is taken with BDF1. For l = 3 the
/// interval covering the first two internal steps of size d is resolved with
/// BDF1/BDF2 on micro-steps of size d / M, M = ceil(1/d) (capped), so that the
/// starting values carry an error well below the O(d^3) of the main scheme.
///
/// All steps run in the real Schur coordinates of T, so each step costs one
/// quasi-triangular back-substitution.
KernelTrajectorySym bdf_integrate(const DenseMat& tm, const Vector& bm, const SymmetricMat& y0, const TimeGrid& grid,
                                  int l, const BdfOptions& options = {});

/// sqrt(2) ||T_sub (last w rows of Y)||_F, w = T_sub.rows().
double residual_bound_bdf(const DenseMat& t_sub, const SymmetricMat& y);

struct EgadlOptions {
  Index m_max = 30;
  double tol = 1e-8;
  int l = 2;
  Index substeps = 1;
  /// Check the bound at every `probe_stride`-th node (the last node is always checked).
  Index probe_stride = 1;
  double arnoldi_tol = 1e-12;
  /// Relative eigenvalue cut-off for the output factors.
  double trunc_tol = 1e-12;
};

/// Extended global Arnoldi projection with BDF integration of the projected
/// Lyapunov equation. Nonzero X0 = Z0 Z0^T is handled by seeding the process with
/// B and the width-p column blocks of Z0.
std::pair<LowRankSolution, SolveReport> egadl_solve(const DLEProblem& problem, const TimeGrid& grid,
                                                    const EgadlOptions& options = {});

}  // namespace krymat
