#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "krymat/blockmat.hpp"
#include "krymat/sparse.hpp"

namespace krymat {

/// A linear map on n x p matrices.
struct MatrixOperator {
  Index rows = 0;
  Index cols = 0;
  std::function<DenseMat(const DenseMat&)> apply;

  /// X -> A X.
  static MatrixOperator left_multiply(const SparseMat& a);
};

struct HessenbergData {
  Index m = 0;          ///< steps completed
  DenseMat htilde;      ///< (m+1) x m upper Hessenberg
  double h_sub = 0.0;   ///< h_{m+1,m}
  bool breakdown = false;

  /// H_m: htilde without its last row.
  DenseMat hm() const { return htilde.topRows(m); }
};

/// Modified global Arnoldi process, one step at a time. The state after k steps
/// holds V_1..V_{k+1} (V_{k+1} only when no breakdown occurred) and the images
/// A(V_1)..A(V_k).
class GlobalArnoldi {
 public:
  /// Starts from V_1 = seed / ||seed||_F. Breakdown at step j is declared when
  /// h_{j+1,j} <= tol * ||A(V_j)||_F.
  GlobalArnoldi(MatrixOperator op, const DenseMat& seed, double tol = 1e-14);

  /// Performs one step. Returns false (and does nothing) once broken down.
  bool extend();

  Index steps() const noexcept { return m_; }
  bool breakdown() const noexcept { return breakdown_; }
  double beta() const noexcept { return beta_; }

  /// V_1..V_m.
  BlockBasis basis() const;
  /// V_1..V_{m+1}; after a breakdown this equals basis().
  BlockRow extended_row() const;
  /// A(V_1)..A(V_m).
  BlockRow images() const;
  HessenbergData hessenberg() const;

 private:
  MatrixOperator op_;
  double tol_;
  double beta_ = 0.0;
  std::vector<DenseMat> v_;
  std::vector<DenseMat> av_;
  DenseMat h_;  // grows to (m+1) x m
  Index m_ = 0;
  bool breakdown_ = false;
};

/// Runs up to m steps of the modified global Arnoldi process from seed V.
std::pair<BlockBasis, HessenbergData> global_arnoldi(const MatrixOperator& op, const DenseMat& v, Index m,
                                                     double tol = 1e-14);

}  // namespace krymat
