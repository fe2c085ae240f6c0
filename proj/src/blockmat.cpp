#include "krymat/blockmat.hpp"

#include <cmath>
#include <string>

#include "krymat/errors.hpp"

namespace krymat {

BlockRow::BlockRow(DenseMat data, Index block_width) : data_(std::move(data)), width_(block_width) {
  if (width_ <= 0) throw DimensionError("BlockRow: block width must be positive");
  if (data_.cols() % width_ != 0) {
    throw DimensionError("BlockRow: " + std::to_string(data_.cols()) +
                         " columns is not a multiple of block width " + std::to_string(width_));
  }
}

BlockRow BlockRow::single(DenseMat block) {
  const Index w = block.cols();
  return BlockRow(std::move(block), w);
}

BlockRow BlockRow::leading(Index k) const { return slice(0, k); }

BlockRow BlockRow::slice(Index first, Index count) const {
  if (first < 0 || count < 0 || first + count > blocks()) {
    throw DimensionError("BlockRow::slice: block range out of bounds");
  }
  return BlockRow(data_.middleCols(first * width_, count * width_), width_);
}

void BlockRow::append(const BlockRow& other) {
  if (width_ == 0) {
    *this = other;
    return;
  }
  if (other.rows() != rows() || other.block_width() != width_) {
    throw DimensionError("BlockRow::append: shape mismatch");
  }
  DenseMat grown(rows(), data_.cols() + other.data_.cols());
  grown << data_, other.data_;
  data_ = std::move(grown);
}

BlockBasis BlockBasis::checked(BlockRow row, double tol) {
  BlockBasis b(std::move(row), tol);
  const double defect = b.orthonormality_defect();
  if (defect > tol * std::max<double>(1.0, static_cast<double>(b.blocks()))) {
    throw NumericError("BlockBasis: F-orthonormality defect " + std::to_string(defect));
  }
  return b;
}

BlockBasis BlockBasis::trusted(BlockRow row, double tol) { return BlockBasis(std::move(row), tol); }

double BlockBasis::orthonormality_defect() const {
  if (blocks() == 0) return 0.0;
  const DenseMat g = diamond(row_, row_);
  return (g - DenseMat::Identity(g.rows(), g.cols())).norm();
}

double frob_inner(const Eigen::Ref<const DenseMat>& y, const Eigen::Ref<const DenseMat>& z) {
  if (y.rows() != z.rows() || y.cols() != z.cols()) {
    throw DimensionError("frob_inner: shape mismatch");
  }
  return (y.array() * z.array()).sum();
}

DenseMat diamond(const BlockRow& z, const BlockRow& w) {
  if (z.rows() != w.rows() || z.block_width() != w.block_width()) {
    throw DimensionError("diamond: block rows differ in height or block width");
  }
  const Index m = z.blocks();
  const Index l = w.blocks();
  DenseMat out(m, l);
  for (Index j = 0; j < l; ++j) {
    for (Index i = 0; i < m; ++i) out(i, j) = frob_inner(z.block(i), w.block(j));
  }
  return out;
}

BlockRow kron_apply(const BlockRow& v, const Eigen::Ref<const DenseMat>& s) {
  if (s.rows() != v.blocks()) {
    throw DimensionError("kron_apply: coefficient rows " + std::to_string(s.rows()) +
                         " != block count " + std::to_string(v.blocks()));
  }
  const Index w = v.block_width();
  DenseMat out = DenseMat::Zero(v.rows(), s.cols() * w);
  for (Index j = 0; j < s.cols(); ++j) {
    auto dst = out.middleCols(j * w, w);
    for (Index i = 0; i < s.rows(); ++i) {
      const double c = s(i, j);
      if (c != 0.0) dst.noalias() += c * v.block(i);
    }
  }
  return BlockRow(std::move(out), w);
}

DenseMat kron_apply_vec(const BlockRow& v, const Eigen::Ref<const Vector>& y) {
  return kron_apply(v, y).data();
}

BlockBasis GlobalQr::basis() const {
  if (deficient.empty()) return BlockBasis::trusted(q, 1e-12);
  DenseMat kept(q.rows(), (q.blocks() - static_cast<Index>(deficient.size())) * q.block_width());
  Index col = 0;
  std::size_t d = 0;
  for (Index j = 0; j < q.blocks(); ++j) {
    if (d < deficient.size() && deficient[d] == j) {
      ++d;
      continue;
    }
    kept.middleCols(col, q.block_width()) = q.block(j);
    col += q.block_width();
  }
  return BlockBasis::trusted(BlockRow(std::move(kept), q.block_width()), 1e-12);
}

GlobalQr global_qr(const BlockRow& z, double tol) {
  const Index m = z.blocks();
  const Index w = z.block_width();
  if (m < 1 || z.rows() < 1) throw DimensionError("global_qr: empty block row");

  GlobalQr out;
  DenseMat q = z.data();
  out.r = DenseMat::Zero(m, m);
  std::vector<char> retained(static_cast<std::size_t>(m), 0);
  const double scale = z.norm();
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

  for (Index j = 0; j < m; ++j) {
    auto qj = q.middleCols(j * w, w);
    const double before = qj.norm();
    for (int pass = 0; pass < 2; ++pass) {
      for (Index i = 0; i < j; ++i) {
        if (!retained[static_cast<std::size_t>(i)]) continue;
        const auto qi = q.middleCols(i * w, w);
        const double c = frob_inner(qi, qj);
        out.r(i, j) += c;
        qj -= c * qi;
      }
      if (qj.norm() >= inv_sqrt2 * before) break;
    }
    const double rjj = qj.norm();
    if (!(rjj > tol * scale) || rjj == 0.0) {
      out.deficient.push_back(j);
      qj.setZero();
      continue;
    }
    out.r(j, j) = rjj;
    qj /= rjj;
    retained[static_cast<std::size_t>(j)] = 1;
  }
  out.q = BlockRow(std::move(q), w);
  return out;
}

}  // namespace krymat
