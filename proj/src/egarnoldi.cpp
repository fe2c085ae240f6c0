#include "krymat/egarnoldi.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "krymat/errors.hpp"

namespace krymat {

ExtGlobalArnoldi::ExtGlobalArnoldi(const SparseMat& a, std::shared_ptr<const LinearSolver> solver,
                                   const BlockRow& seeds, double tol)
    : a_(a), solver_(std::move(solver)), tol_(tol) {
  n_ = a.rows();
  if (a.cols() != n_) throw DimensionError("ExtGlobalArnoldi: A must be square");
  if (!solver_ || solver_->size() != n_) throw DimensionError("ExtGlobalArnoldi: solver does not match A");
  if (seeds.rows() != n_ || seeds.blocks() < 1) throw DimensionError("ExtGlobalArnoldi: seeds must be n x (s*p)");
  p_ = seeds.block_width();

  // Seeds that depend on earlier ones add nothing to the subspace.
  const GlobalQr dedup = global_qr(seeds);
  if (!seeds.data().allFinite()) throw NumericError("ExtGlobalArnoldi: non-finite seed");
  if (!(seeds.block(0).norm() > 0.0) ||
      std::find(dedup.deficient.begin(), dedup.deficient.end(), Index{0}) != dedup.deficient.end()) {
    throw InvalidArgument("ExtGlobalArnoldi: zero seed");
  }
  std::vector<Index> kept;
  for (Index c = 0; c < seeds.blocks(); ++c) {
    if (std::find(dedup.deficient.begin(), dedup.deficient.end(), c) == dedup.deficient.end()) kept.push_back(c);
  }
  s_ = static_cast<Index>(kept.size());
  w_ = 2 * s_;

  DenseMat z(n_, w_ * p_);
  for (Index c = 0; c < s_; ++c) z.middleCols(c * p_, p_) = seeds.block(kept[static_cast<std::size_t>(c)]);
  z.rightCols(s_ * p_) = solver_->solve(z.leftCols(s_ * p_));
  // Each A^{-1} S_c is stored blockwise; the solver handles all columns at once.

  const GlobalQr qr = global_qr(BlockRow(z, p_));
  r_init_ = qr.r;
  if (qr.rank_deficient()) {
    invariant_fallback(qr.basis().row());
    return;
  }
  append_blocks(qr.q.data());
  h_.resize(w_, 0);
  t_.resize(w_, 0);
}

void ExtGlobalArnoldi::append_blocks(const DenseMat& blocks) {
  const Index add = blocks.cols() / p_;
  const Index needed = (sub_blocks_ + add) * p_;
  if (v_.cols() < needed) {
    const Index capacity = std::max(needed, 2 * v_.cols());
    v_.conservativeResize(n_, capacity);
  }
  v_.middleCols(sub_blocks_ * p_, add * p_) = blocks;
  sub_blocks_ += add;
}

void ExtGlobalArnoldi::invariant_fallback(const BlockRow& retained) {
  const DenseMat aw = a_ * retained.data();
  const BlockRow aw_row(aw, p_);
  const DenseMat t = diamond(retained, aw_row);
  const double defect = (aw - kron_apply(retained, t).data()).norm();
  if (defect > 1e-9 * std::max(1.0, aw.norm())) {
    throw IllPosedError(
        "ExtGlobalArnoldi: the initial block [S, A^{-1}S] is rank deficient and its range is not invariant under A");
  }
  const Index k = retained.blocks();
  append_blocks(retained.data());
  t_ = DenseMat::Zero(k + w_, k);
  t_.topRows(k) = t;
  h_ = t_;
  m_ = 1;
  breakdown_ = true;
  fallback_ = true;
}

bool ExtGlobalArnoldi::extend() {
  if (breakdown_) return false;
  const Index j = m_;
  const Index prev = (j + 1) * w_;  // sub-blocks available before this step

  DenseMat u(n_, w_ * p_);
  u.leftCols(s_ * p_) = a_ * v_.middleCols(j * w_ * p_, s_ * p_);
  u.rightCols(s_ * p_) = solver_->solve(v_.middleCols((j * w_ + s_) * p_, s_ * p_));
  if (!u.allFinite()) throw NumericError("ExtGlobalArnoldi: non-finite values in the new block");

  Vector before(w_);
  for (Index c = 0; c < w_; ++c) before(c) = u.middleCols(c * p_, p_).norm();

  h_.conservativeResize(prev + w_, prev);
  h_.bottomRows(w_).setZero();
  h_.rightCols(w_).setZero();

  auto orthogonalize = [&]() {
    for (Index k = 0; k < prev; ++k) {
      const auto vk = sub(k);
      for (Index c = 0; c < w_; ++c) {
        auto uc = u.middleCols(c * p_, p_);
        const double coef = frob_inner(vk, uc);
        h_(k, j * w_ + c) += coef;
        uc -= coef * vk;
      }
    }
  };
  orthogonalize();
  bool again = false;
  for (Index c = 0; c < w_; ++c) {
    if (u.middleCols(c * p_, p_).norm() < before(c) / std::sqrt(2.0)) again = true;
  }
  if (again) orthogonalize();

  const GlobalQr qr = global_qr(BlockRow(u, p_));
  bool broke = qr.rank_deficient();
  for (Index c = 0; c < w_; ++c) {
    if (qr.r(c, c) <= tol_ * before(c)) broke = true;
  }
  h_.block(prev, j * w_, w_, w_) = qr.r;
  if (broke) {
    // Directions below the threshold are noise; an exactly invariant subspace
    // leaves a zero coupling block.
    for (Index c = 0; c < w_; ++c) {
      if (qr.r(c, c) <= tol_ * before(c)) h_.block(prev, j * w_ + c, w_, 1).setZero();
    }
  }
  append_blocks(qr.q.data());
  m_ = j + 1;
  assemble_columns(j);
  breakdown_ = broke;
  return true;
}

void ExtGlobalArnoldi::assemble_columns(Index j) {
  const Index rows = (j + 2) * w_;
  const Index cols = (j + 1) * w_;
  t_.conservativeResize(rows, cols);
  t_.bottomRows(w_).setZero();
  t_.rightCols(w_).setZero();

  for (Index c = 0; c < s_; ++c) t_.col(j * w_ + c) = h_.col(j * w_ + c);

  for (Index c = 0; c < s_; ++c) {
    const Index col = j * w_ + s_ + c;
    Vector rhs = Vector::Zero(rows);
    Vector coef = Vector::Zero(rows);
    if (j == 0) {
      rhs.head(w_) = r_init_.col(c);
      coef.head(w_) = r_init_.col(s_ + c);
    } else {
      const Index q = (j - 1) * w_ + s_ + c;
      rhs(q) = 1.0;
      coef = h_.col(q);
    }
    const double pivot = coef(col);
    for (Index k = 0; k < col; ++k) {
      if (coef(k) != 0.0) rhs -= coef(k) * t_.col(k);
    }
    t_.col(col) = rhs / pivot;
  }
}

BlockBasis ExtGlobalArnoldi::basis() const {
  const Index k = fallback_ ? t_.cols() : m_ * w_;
  return BlockBasis::trusted(BlockRow(v_.leftCols(k * p_), p_), 1e-12);
}

BlockRow ExtGlobalArnoldi::extended_row() const {
  return BlockRow(v_.leftCols(sub_blocks_ * p_), p_);
}

ExtHessenbergData ExtGlobalArnoldi::hessenberg() const {
  ExtHessenbergData out;
  out.m = m_;
  out.width = w_;
  out.ttilde = t_;
  out.r_init = r_init_;
  out.h = h_;
  out.breakdown = breakdown_;
  if (t_.cols() >= w_ && !fallback_) {
    out.t_sub = t_.bottomRightCorner(w_, w_);
  } else {
    out.t_sub = DenseMat::Zero(w_, w_);
  }
  return out;
}

std::pair<BlockBasis, ExtHessenbergData> ext_global_arnoldi(const SparseMat& a,
                                                            std::shared_ptr<const LinearSolver> solver,
                                                            const DenseMat& b, Index m, double tol) {
  if (m < 1) throw InvalidArgument("ext_global_arnoldi: m must be >= 1");
  ExtGlobalArnoldi process(a, std::move(solver), BlockRow::single(b), tol);
  while (process.steps() < m && process.extend()) {
  }
  return {process.basis(), process.hessenberg()};
}

}  // namespace krymat
