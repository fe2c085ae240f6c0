#pragma once

#include <string>
#include <vector>

#include "krymat/blockmat.hpp"
#include "krymat/sparse.hpp"

namespace krymat {

/// dX/dt = sum_i A_i X B_i + C,  X(t0) = X0.
struct GenSylvesterProblem {
  std::vector<SparseMat> a;  ///< q matrices, n x n
  std::vector<SparseMat> b;  ///< q matrices, p x p
  DenseMat c;                ///< n x p
  DenseMat x0;               ///< n x p (constant initial guess)
  double t0 = 0.0;
  double tf = 1.0;

  Index n() const noexcept { return c.rows(); }
  Index p() const noexcept { return c.cols(); }
  Index terms() const noexcept { return static_cast<Index>(a.size()); }

  /// Throws on inconsistent shapes or t0 >= Tf. Returns advisory warnings
  /// (e.g. C not of full column rank).
  std::vector<std::string> validate() const;
};

/// dX/dt = A X + X A^T + B B^T,  X(t0) = Z0 Z0^T.
struct DLEProblem {
  SparseMat a;  ///< n x n, nonsingular
  DenseMat b;   ///< n x p
  DenseMat z0;  ///< n x r0; zero columns (r0 = 0) means X0 = 0
  double t0 = 0.0;
  double tf = 1.0;

  Index n() const noexcept { return a.rows(); }
  Index p() const noexcept { return b.cols(); }
  bool zero_initial() const { return z0.cols() == 0 || z0.norm() == 0.0; }

  std::vector<std::string> validate() const;
};

/// sum_i A_i X B_i via sparse-dense products.
DenseMat gsylv_apply(const GenSylvesterProblem& p, const DenseMat& x);

/// Adjoint in the Frobenius inner product: sum_i A_i^T X B_i^T.
DenseMat gsylv_apply_transpose(const GenSylvesterProblem& p, const DenseMat& x);

}  // namespace krymat
