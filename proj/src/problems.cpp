#include "krymat/problems.hpp"

#include <cmath>

#include <Eigen/QR>

#include "krymat/errors.hpp"

namespace krymat {
namespace {

bool full_column_rank(const DenseMat& m) {
  if (m.cols() > m.rows()) return false;
  Eigen::ColPivHouseholderQR<DenseMat> qr(m);
  qr.setThreshold(1e-12);
  return qr.rank() == m.cols();
}

void check_interval(double t0, double tf) {
  if (!std::isfinite(t0) || !std::isfinite(tf) || !(t0 < tf)) {
    throw InvalidArgument("problem: need finite t0 < Tf");
  }
}

}  // namespace

std::vector<std::string> GenSylvesterProblem::validate() const {
  if (a.size() != b.size()) throw DimensionError("GenSylvesterProblem: A and B lists differ in length");
  if (a.empty()) throw DimensionError("GenSylvesterProblem: need at least one term");
  const Index nn = c.rows();
  const Index pp = c.cols();
  if (nn < 1 || pp < 1) throw DimensionError("GenSylvesterProblem: C is empty");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].rows() != nn || a[i].cols() != nn) {
      throw DimensionError("GenSylvesterProblem: A_" + std::to_string(i + 1) + " is not n x n");
    }
    if (b[i].rows() != pp || b[i].cols() != pp) {
      throw DimensionError("GenSylvesterProblem: B_" + std::to_string(i + 1) + " is not p x p");
    }
  }
  if (x0.rows() != nn || x0.cols() != pp) throw DimensionError("GenSylvesterProblem: X0 is not n x p");
  if (!c.allFinite() || !x0.allFinite()) throw NumericError("GenSylvesterProblem: non-finite data");
  check_interval(t0, tf);
  std::vector<std::string> warnings;
  if (c.norm() > 0.0 && !full_column_rank(c)) warnings.emplace_back("C is not of full column rank");
  return warnings;
}

std::vector<std::string> DLEProblem::validate() const {
  const Index nn = a.rows();
  if (nn < 1 || a.cols() != nn) throw DimensionError("DLEProblem: A must be square and nonempty");
  if (b.rows() != nn || b.cols() < 1) throw DimensionError("DLEProblem: B must be n x p with p >= 1");
  if (z0.cols() > 0 && z0.rows() != nn) throw DimensionError("DLEProblem: Z0 must have n rows");
  if (!b.allFinite() || !z0.allFinite()) throw NumericError("DLEProblem: non-finite data");
  check_interval(t0, tf);
  std::vector<std::string> warnings;
  if (b.norm() > 0.0 && !full_column_rank(b)) warnings.emplace_back("B is not of full column rank");
  if (10 * b.cols() > nn) warnings.emplace_back("p exceeds n/10; low-rank methods may be inefficient");
  return warnings;
}

DenseMat gsylv_apply(const GenSylvesterProblem& p, const DenseMat& x) {
  if (x.rows() != p.n() || x.cols() != p.p()) throw DimensionError("gsylv_apply: X is not n x p");
  DenseMat out = DenseMat::Zero(p.n(), p.p());
  for (std::size_t i = 0; i < p.a.size(); ++i) {
    const DenseMat ax = p.a[i] * x;
    out.noalias() += (p.b[i].transpose() * ax.transpose()).transpose();
  }
  return out;
}

DenseMat gsylv_apply_transpose(const GenSylvesterProblem& p, const DenseMat& x) {
  if (x.rows() != p.n() || x.cols() != p.p()) {
    throw DimensionError("gsylv_apply_transpose: X is not n x p");
  }
  DenseMat out = DenseMat::Zero(p.n(), p.p());
  for (std::size_t i = 0; i < p.a.size(); ++i) {
    const DenseMat ax = p.a[i].transpose() * x;
    out.noalias() += (p.b[i] * ax.transpose()).transpose();
  }
  return out;
}

}  // namespace krymat
