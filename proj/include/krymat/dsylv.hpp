#pragma once

#include <utility>

#include "krymat/blockmat.hpp"
#include "krymat/garnoldi.hpp"
#include "krymat/problems.hpp"
#include "krymat/solution.hpp"
#include "krymat/time_grid.hpp"

namespace krymat {

/// c_m = -(V_m^T <> R0), as a vector of length m.
Vector project_rhs(const BlockBasis& basis, const DenseMat& r0);

/// Exponential Euler for y' = H y + c with constant c:
///   y_{k+1} = e^{hH} y_k + h psi_1(hH) c,
/// which is exact on a uniform grid.
KernelTrajectoryVec integrate_projected(const DenseMat& hm, const Vector& cm, const Vector& y0, const TimeGrid& grid);

/// ||R_m(t)||_F = |h_{m+1,m}| |y_m^{(m)}(t)| when y solves the projected ODE.
double residual_norm(const HessenbergData& h, const Vector& y);

struct GalerkinOptions {
  Index m_max = 50;
  double eps = 1e-8;
  double arnoldi_tol = 1e-14;
};

/// Global-Galerkin solver for dX/dt = sum_i A_i X B_i + C with constant X0.
/// The basis grows one block at a time from V_1 = R0 / ||R0||_F, R0 = -A(X0) - C;
/// after each step the projected ODE is re-solved and the largest residual over
/// the grid nodes is compared with eps.
std::pair<GalerkinSolution, SolveReport> galerkin_solve(const GenSylvesterProblem& problem, const TimeGrid& grid,
                                                        const GalerkinOptions& options = {});

}  // namespace krymat
