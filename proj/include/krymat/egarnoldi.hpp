#pragma once

#include <memory>
#include <utility>

#include "krymat/blockmat.hpp"
#include "krymat/sparse.hpp"

namespace krymat {

/// Block Hessenberg data of the extended process. With s seed blocks each basis
/// block V_j has w = 2s sub-blocks of width p; all matrices below are indexed by
/// sub-block.
struct ExtHessenbergData {
  Index m = 0;        ///< completed steps (basis blocks)
  Index width = 2;    ///< sub-blocks per basis block (2s)
  DenseMat ttilde;    ///< (k + w) x k upper block Hessenberg, k = order()
  DenseMat t_sub;     ///< w x w block T_{m+1,m}
  DenseMat r_init;    ///< w x w upper triangular factor of the initial global QR
  DenseMat h;         ///< raw orthogonalization coefficients H_{i,j}
  bool breakdown = false;

  /// Order of the projected problem (number of width-p sub-blocks in the basis).
  Index order() const noexcept { return ttilde.cols(); }
  /// T_m: ttilde without its last w rows.
  DenseMat tm() const { return ttilde.topRows(order()); }
};

/// Extended global Arnoldi process for the subspace spanned by
/// A^{-m}S, ..., A^{-1}S, S, AS, ..., A^{m-1}S over the seed blocks S.
/// T_m is assembled from the orthogonalization coefficients without further
/// products with A.
///
/// When the initial block [S, A^{-1}S] is rank deficient the process stops at
/// once. If the retained blocks W span an A-invariant subspace, T = W^T <> (A W)
/// is used and the data is flagged as a (lucky) breakdown with T_sub = 0;
/// otherwise IllPosedError is thrown.
class ExtGlobalArnoldi {
 public:
  ExtGlobalArnoldi(const SparseMat& a, std::shared_ptr<const LinearSolver> solver, const BlockRow& seeds,
                   double tol = 1e-12);

  /// One step. Returns false once broken down.
  bool extend();

  Index steps() const noexcept { return m_; }
  bool breakdown() const noexcept { return breakdown_; }
  Index seed_blocks() const noexcept { return s_; }

  /// Sub-blocks of V_1..V_m.
  BlockBasis basis() const;
  /// Sub-blocks of V_1..V_{m+1}. After a breakdown the directions of V_{m+1} that
  /// fell below the threshold are zero.
  BlockRow extended_row() const;
  ExtHessenbergData hessenberg() const;

 private:
  void assemble_columns(Index j);
  void invariant_fallback(const BlockRow& retained);

  SparseMat a_;
  std::shared_ptr<const LinearSolver> solver_;
  double tol_;
  Index n_ = 0;
  Index p_ = 0;
  Index s_ = 0;
  Index w_ = 0;
  DenseMat v_;  // n x (sub-blocks * p), capacity grows by doubling
  Index sub_blocks_ = 0;
  DenseMat h_;
  DenseMat t_;
  DenseMat r_init_;
  Index m_ = 0;
  bool breakdown_ = false;
  bool fallback_ = false;

  void append_blocks(const DenseMat& blocks);
  auto sub(Index k) const { return v_.middleCols(k * p_, p_); }
};

/// Runs up to m steps from the single seed B.
std::pair<BlockBasis, ExtHessenbergData> ext_global_arnoldi(const SparseMat& a,
                                                            std::shared_ptr<const LinearSolver> solver,
                                                            const DenseMat& b, Index m, double tol = 1e-12);

}  // namespace krymat
