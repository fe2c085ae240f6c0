#pragma once

#include <vector>

#include <Eigen/Core>

namespace krymat {

using Index = Eigen::Index;
using DenseMat = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// A row of equally wide blocks [Z_1, ..., Z_m], stored contiguously as one
/// n x (m*s) matrix. Block j occupies columns [j*s, (j+1)*s).
class BlockRow {
 public:
  BlockRow() = default;
  BlockRow(DenseMat data, Index block_width);

  /// One-block row holding `block`.
  static BlockRow single(DenseMat block);

  Index rows() const noexcept { return data_.rows(); }
  Index block_width() const noexcept { return width_; }
  Index blocks() const noexcept { return width_ == 0 ? 0 : data_.cols() / width_; }

  const DenseMat& data() const noexcept { return data_; }

  auto block(Index j) const { return data_.middleCols(j * width_, width_); }

  /// The first k blocks.
  BlockRow leading(Index k) const;

  /// Blocks [first, first+count).
  BlockRow slice(Index first, Index count) const;

  /// Appends the blocks of `other` (same n and width) on the right.
  void append(const BlockRow& other);

  /// Frobenius norm of the whole row.
  double norm() const { return data_.norm(); }

 private:
  DenseMat data_;
  Index width_ = 0;
};

/// An F-orthonormal block row: basis^T <> basis = I_m up to `tolerance`.
class BlockBasis {
 public:
  BlockBasis() = default;

  /// Verifies F-orthonormality and throws NumericError if the defect exceeds
  /// `tol` * max(1, m).
  static BlockBasis checked(BlockRow row, double tol = 1e-10);

  /// Wraps a row the caller has orthonormalized itself. No check.
  static BlockBasis trusted(BlockRow row, double tol);

  const BlockRow& row() const noexcept { return row_; }
  Index rows() const noexcept { return row_.rows(); }
  Index block_width() const noexcept { return row_.block_width(); }
  Index blocks() const noexcept { return row_.blocks(); }
  auto block(Index j) const { return row_.block(j); }
  double tolerance() const noexcept { return tol_; }

  BlockBasis leading(Index k) const { return trusted(row_.leading(k), tol_); }

  /// ||V^T <> V - I||_F
  double orthonormality_defect() const;

 private:
  BlockBasis(BlockRow row, double tol) : row_(std::move(row)), tol_(tol) {}

  BlockRow row_;
  double tol_ = 0.0;
};

/// tr(Y^T Z).
double frob_inner(const Eigen::Ref<const DenseMat>& y, const Eigen::Ref<const DenseMat>& z);

/// Z^T <> W: the m x l matrix of block Frobenius inner products <Z_i, W_j>.
DenseMat diamond(const BlockRow& z, const BlockRow& w);

/// V (S (x) I_s) evaluated blockwise: output block j is sum_i S(i,j) V_i.
BlockRow kron_apply(const BlockRow& v, const Eigen::Ref<const DenseMat>& s);

/// Vector overload: V (y (x) I_s) as a single n x s block.
DenseMat kron_apply_vec(const BlockRow& v, const Eigen::Ref<const Vector>& y);

struct GlobalQr {
  /// All m blocks; a block flagged rank deficient is stored as zeros.
  BlockRow q;
  /// m x m upper triangular factor, Z = Q (R (x) I_s).
  DenseMat r;
  /// Indices of blocks that were numerically dependent on their predecessors.
  std::vector<Index> deficient;

  bool rank_deficient() const noexcept { return !deficient.empty(); }

  /// The retained (non-deficient) blocks as an F-orthonormal basis.
  BlockBasis basis() const;
};

/// Global QR by modified Gram-Schmidt in the Frobenius inner product, with one
/// reorthogonalization pass whenever a block loses more than 1/sqrt(2) of its norm.
/// A diagonal entry below tol * ||Z||_F flags the block as dependent.
GlobalQr global_qr(const BlockRow& z, double tol = 1e-12);

}  // namespace krymat
