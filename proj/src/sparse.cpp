#include "krymat/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <vector>

#include <Eigen/OrderingMethods>
#include <Eigen/SparseLU>

#include "krymat/errors.hpp"

namespace krymat {

SparseMat sparse_identity(Index n) {
  SparseMat id(n, n);
  id.setIdentity();
  id.makeCompressed();
  return id;
}

SparseMat sparse_from_dense(const DenseMat& m) {
  std::vector<Eigen::Triplet<double>> trips;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (m(i, j) != 0.0) trips.emplace_back(static_cast<int>(i), static_cast<int>(j), m(i, j));
    }
  }
  SparseMat s(m.rows(), m.cols());
  s.setFromTriplets(trips.begin(), trips.end());
  s.makeCompressed();
  return s;
}

double lognorm2_upper_bound(const SparseMat& a) {
  if (a.rows() != a.cols()) throw DimensionError("lognorm2_upper_bound: matrix is not square");
  const SparseMat at = a.transpose();
  const SparseMat sym = 0.5 * (a + at);
  double bound = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < sym.outerSize(); ++i) {
    double diag = 0.0;
    double radius = 0.0;
    for (SparseMat::InnerIterator it(sym, i); it; ++it) {
      if (it.col() == i) {
        diag = it.value();
      } else {
        radius += std::abs(it.value());
      }
    }
    bound = std::max(bound, diag + radius);
  }
  return bound;
}

double norm1(const SparseMat& a) {
  std::vector<double> colsum(static_cast<std::size_t>(a.cols()), 0.0);
  for (Index i = 0; i < a.outerSize(); ++i) {
    for (SparseMat::InnerIterator it(a, i); it; ++it) {
      colsum[static_cast<std::size_t>(it.col())] += std::abs(it.value());
    }
  }
  return colsum.empty() ? 0.0 : *std::max_element(colsum.begin(), colsum.end());
}

struct LinearSolver::Impl {
  using ColMajor = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
  ColMajor a;
  Eigen::SparseLU<ColMajor, Eigen::COLAMDOrdering<int>> lu;
  // SparseLU::solve is not documented as reentrant; serialize it.
  mutable std::mutex mutex;
};

LinearSolver::LinearSolver(const SparseMat& a) : impl_(std::make_unique<Impl>()), n_(a.rows()) {
  if (a.rows() != a.cols()) throw DimensionError("LinearSolver: matrix is not square");
  if (a.rows() == 0) throw DimensionError("LinearSolver: empty matrix");
  impl_->a = a;
  impl_->a.makeCompressed();
  impl_->lu.analyzePattern(impl_->a);
  impl_->lu.factorize(impl_->a);
  if (impl_->lu.info() != Eigen::Success) {
    throw FactorizationError("LinearSolver: sparse LU failed: " + impl_->lu.lastErrorMessage());
  }
  // SparseLU reports success for some exactly singular inputs; a zero pivot
  // shows up as log|det| = -inf.
  if (!std::isfinite(impl_->lu.logAbsDeterminant())) {
    throw FactorizationError("LinearSolver: matrix is singular");
  }
}

LinearSolver::~LinearSolver() = default;
LinearSolver::LinearSolver(LinearSolver&&) noexcept = default;
LinearSolver& LinearSolver::operator=(LinearSolver&&) noexcept = default;

DenseMat LinearSolver::solve(const DenseMat& w) const {
  if (w.rows() != n_) throw DimensionError("LinearSolver::solve: right-hand side has wrong height");
  std::lock_guard<std::mutex> lock(impl_->mutex);
  DenseMat x = impl_->lu.solve(w);
  if (impl_->lu.info() != Eigen::Success) throw FactorizationError("LinearSolver: solve failed");
  for (int refine = 0; refine < 2; ++refine) {
    const DenseMat r = w - impl_->a * x;
    bool ok = true;
    for (Index j = 0; j < w.cols(); ++j) {
      if (r.col(j).norm() > 1e-10 * w.col(j).norm()) ok = false;
    }
    if (ok) break;
    x += impl_->lu.solve(r);
  }
  if (!x.allFinite()) throw NumericError("LinearSolver: non-finite solution");
  return x;
}

}  // namespace krymat
