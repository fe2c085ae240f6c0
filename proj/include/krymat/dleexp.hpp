#pragma once

#include <utility>

#include "krymat/blockmat.hpp"
#include "krymat/problems.hpp"
#include "krymat/smallmat.hpp"
#include "krymat/solution.hpp"
#include "krymat/time_grid.hpp"

namespace krymat {

/// beta V_m (e^{s H_m} e_1 (x) I_p): Krylov approximation of e^{sA} B.
DenseMat krylov_expm_action(const BlockBasis& basis, const DenseMat& hm, double beta, double s);

/// G_m(t_k) = ∫_{t0}^{t_k} e^{(t_k-τ)H} β² e_1 e_1^T e^{(t_k-τ)H^T} dτ, one sample per node.
struct GramTrajectory {
  KernelTrajectorySym kernel;
  double beta = 0.0;
};

GramTrajectory gram_trajectory(const DenseMat& hm, double beta, const TimeGrid& grid);

/// |h_{m+1,m}| times the Euclidean norm of the last row of G.
double residual_bound_exp(double h_sub, const SymmetricMat& g);

/// |h_sub| Gbar_max (e^{2(t-t0) mu2} - 1) / (2 mu2), with the limit
/// |h_sub| Gbar_max (t - t0) when |mu2| < 1e-14.
double apriori_error_bound(double h_sub, double gbar_max, double mu2, double t, double t0);

enum class ExpoVariant { global, extended };

struct ExpoOptions {
  Index m_max = 30;
  double tol = 1e-8;
  ExpoVariant variant = ExpoVariant::global;
  double arnoldi_tol = -1.0;  ///< negative selects the variant's default
  double trunc_tol = 1e-12;
  Index probe_stride = 1;
};

/// Exponential method for X0 = 0: X_m(t) = V_m (G_m(t) (x) I_p) V_m^T with G_m the
/// Gramian of the projected matrix. The reported residual bound is
/// sqrt(2) |h_{m+1,m}| ||last row of G_m(t)|| (global) or
/// sqrt(2) ||T_{m+1,m} (last 2 rows of G_m(t))||_F (extended); the a-priori column
/// scales the largest of these over the grid by (e^{2(t-t0)mu} - 1)/(2 mu) with
/// mu = mu_2(A) (or an upper bound for it above the dense cap).
std::pair<LowRankSolution, SolveReport> expo_dle_solve(const DLEProblem& problem, const TimeGrid& grid,
                                                       const ExpoOptions& options = {});

/// Dense check of the perturbed equation dX_m/dt = A X_m + X_m A^T + BB^T - L_m - L_m^T
/// with L_m = h_{m+1,m} V_{m+1} (e_m^T G_m (x) I_p) V_m^T. `extended_row` holds
/// V_1..V_{m+1} (only V_1..V_m after a breakdown). Returns the largest Frobenius
/// defect over the nodes. Refuses n above the dense cap.
double perturbed_equation_check(const BlockRow& extended_row, const DenseMat& hm, double h_sub,
                                const DLEProblem& problem, const GramTrajectory& gram);

}  // namespace krymat
