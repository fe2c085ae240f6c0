#pragma once

#include <memory>

#include <Eigen/SparseCore>

#include "krymat/blockmat.hpp"

namespace krymat {

/// Compressed sparse row storage with sorted, unique column indices per row.
using SparseMat = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;

SparseMat sparse_identity(Index n);
SparseMat sparse_from_dense(const DenseMat& m);

/// Upper bound on mu_2(A) = lambda_max((A + A^T)/2) from Gershgorin discs of the
/// symmetric part. Usable at any size.
double lognorm2_upper_bound(const SparseMat& a);

/// ||A||_1 (maximum absolute column sum).
double norm1(const SparseMat& a);

/// Prefactored sparse LU (COLAMD fill-reducing ordering) for repeated solves with A.
class LinearSolver {
 public:
  /// Throws FactorizationError if A is singular or structurally deficient.
  explicit LinearSolver(const SparseMat& a);
  ~LinearSolver();
  LinearSolver(LinearSolver&&) noexcept;
  LinearSolver& operator=(LinearSolver&&) noexcept;

  Index size() const noexcept { return n_; }

  /// X with A X = W. Up to two steps of iterative refinement are taken when the
  /// relative residual of a column exceeds 1e-10.
  DenseMat solve(const DenseMat& w) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  Index n_ = 0;
};

/// Free-function form used by the Krylov processes.
inline DenseMat solve_with(const LinearSolver& solver, const DenseMat& w) { return solver.solve(w); }

}  // namespace krymat
