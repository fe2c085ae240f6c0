#include "krymat/garnoldi.hpp"

#include <cmath>

#include "krymat/errors.hpp"

namespace krymat {

MatrixOperator MatrixOperator::left_multiply(const SparseMat& a) {
  if (a.rows() != a.cols()) throw DimensionError("left_multiply: A must be square");
  // The operator keeps its own copy so it may outlive the caller's matrix.
  return MatrixOperator{a.rows(), 0, [a](const DenseMat& x) -> DenseMat { return a * x; }};
}

GlobalArnoldi::GlobalArnoldi(MatrixOperator op, const DenseMat& seed, double tol)
    : op_(std::move(op)), tol_(tol) {
  if (!op_.apply) throw InvalidArgument("GlobalArnoldi: empty operator");
  if (op_.rows == 0) op_.rows = seed.rows();
  if (op_.cols == 0) op_.cols = seed.cols();
  if (seed.rows() != op_.rows || seed.cols() != op_.cols) {
    throw DimensionError("GlobalArnoldi: seed shape does not match the operator");
  }
  beta_ = seed.norm();
  if (!(beta_ > 0.0)) throw InvalidArgument("GlobalArnoldi: zero seed");
  if (!std::isfinite(beta_)) throw NumericError("GlobalArnoldi: non-finite seed");
  v_.push_back(seed / beta_);
  h_.resize(1, 0);
}

bool GlobalArnoldi::extend() {
  if (breakdown_) return false;
  const Index j = m_;
  DenseMat w = op_.apply(v_[static_cast<std::size_t>(j)]);
  if (w.rows() != op_.rows || w.cols() != op_.cols) {
    throw DimensionError("GlobalArnoldi: operator returned the wrong shape");
  }
  if (!w.allFinite()) throw NumericError("GlobalArnoldi: operator produced non-finite values");
  av_.push_back(w);
  const double w_norm = w.norm();

  h_.conservativeResize(j + 2, j + 1);
  h_.col(j).setZero();
  h_.row(j + 1).setZero();

  for (Index i = 0; i <= j; ++i) {
    const DenseMat& vi = v_[static_cast<std::size_t>(i)];
    const double hij = frob_inner(vi, w);
    h_(i, j) = hij;
    w -= hij * vi;
  }
  double h_next = w.norm();
  if (h_next < w_norm / std::sqrt(2.0)) {
    for (Index i = 0; i <= j; ++i) {
      const DenseMat& vi = v_[static_cast<std::size_t>(i)];
      const double c = frob_inner(vi, w);
      h_(i, j) += c;
      w -= c * vi;
    }
    h_next = w.norm();
  }

  ++m_;
  if (h_next <= tol_ * w_norm) {
    h_(j + 1, j) = 0.0;
    breakdown_ = true;
    return true;
  }
  h_(j + 1, j) = h_next;
  v_.push_back(w / h_next);
  return true;
}

BlockBasis GlobalArnoldi::basis() const {
  const Index p = op_.cols;
  DenseMat data(op_.rows, m_ * p);
  for (Index i = 0; i < m_; ++i) data.middleCols(i * p, p) = v_[static_cast<std::size_t>(i)];
  return BlockBasis::trusted(BlockRow(std::move(data), p), 1e-12);
}

BlockRow GlobalArnoldi::extended_row() const {
  const Index p = op_.cols;
  const Index k = static_cast<Index>(v_.size());
  DenseMat data(op_.rows, k * p);
  for (Index i = 0; i < k; ++i) data.middleCols(i * p, p) = v_[static_cast<std::size_t>(i)];
  return BlockRow(std::move(data), p);
}

BlockRow GlobalArnoldi::images() const {
  const Index p = op_.cols;
  DenseMat data(op_.rows, m_ * p);
  for (Index i = 0; i < m_; ++i) data.middleCols(i * p, p) = av_[static_cast<std::size_t>(i)];
  return BlockRow(std::move(data), p);
}

HessenbergData GlobalArnoldi::hessenberg() const {
  HessenbergData out;
  out.m = m_;
  out.htilde = h_;
  out.h_sub = m_ > 0 ? h_(m_, m_ - 1) : 0.0;
  out.breakdown = breakdown_;
  return out;
}

std::pair<BlockBasis, HessenbergData> global_arnoldi(const MatrixOperator& op, const DenseMat& v, Index m,
                                                     double tol) {
  if (m < 1) throw InvalidArgument("global_arnoldi: m must be >= 1");
  GlobalArnoldi process(op, v, tol);
  while (process.steps() < m && process.extend()) {
  }
  return {process.basis(), process.hessenberg()};
}

}  // namespace krymat
