#pragma once

#include <vector>

#include "krymat/blockmat.hpp"
#include "krymat/problems.hpp"
#include "krymat/time_grid.hpp"

namespace krymat {

/// M = sum_i B_i^T (x) A_i, the vectorized operator of the general problem.
DenseMat kron_operator(const GenSylvesterProblem& problem);

/// X(t_k) for the general problem from the vectorized closed form
/// x(t) = x0 + (t - t0) psi_1((t - t0) M)(b + M x0). Nodes are propagated with one
/// exponential of the augmented matrix of order n p + 1. Refuses n p above the
/// dense cap.
std::vector<DenseMat> dense_dme_solve(const GenSylvesterProblem& problem, const TimeGrid& grid);

/// X(t_k) = e^{(t-t0)A} X0 e^{(t-t0)A^T} + ∫ e^{(t-τ)A} BB^T e^{(t-τ)A^T} dτ, with the
/// integral from the Van Loan construction. Node-to-node propagation uses
/// X(t + h) = e^{hA} X(t) e^{hA^T} + G(h). Refuses n above the dense cap.
std::vector<DenseMat> dense_dle_exact(const DLEProblem& problem, const TimeGrid& grid);

}  // namespace krymat
