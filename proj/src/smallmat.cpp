#include "krymat/smallmat.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "krymat/errors.hpp"
#include "krymat/limits.hpp"

namespace krymat {
namespace {

void require_square(const Eigen::Ref<const DenseMat>& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw DimensionError(std::string(what) + ": matrix is " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ", expected square");
  }
}

void require_finite(const Eigen::Ref<const DenseMat>& m, const char* what) {
  if (!m.allFinite()) throw NumericError(std::string(what) + ": non-finite entries");
}

// Pade numerator coefficients b_0..b_deg for the diagonal approximants.
constexpr std::array<double, 4> kPade3 = {120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kPade5 = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
constexpr std::array<double, 8> kPade7 = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                                          25200.0,    1512.0,    56.0,      1.0};
constexpr std::array<double, 10> kPade9 = {17643225600.0, 8821612800.0, 2075673600.0,
                                           302702400.0,   30270240.0,   2162160.0,
                                           110880.0,      3960.0,       90.0,
                                           1.0};
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};

// Largest 1-norms for which each approximant meets unit roundoff backward error.
constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

template <std::size_t N>
DenseMat pade_low(const DenseMat& a, const std::array<double, N>& b) {
  const Index k = a.rows();
  const DenseMat id = DenseMat::Identity(k, k);
  const DenseMat a2 = a * a;
  DenseMat pow = id;
  DenseMat u_even = b[1] * id;
  DenseMat v = b[0] * id;
  for (std::size_t j = 2; j < N; j += 2) {
    pow = pow * a2;
    v += b[j] * pow;
    u_even += b[j + 1] * pow;
  }
  const DenseMat u = a * u_even;
  return (v - u).partialPivLu().solve(v + u);
}

DenseMat pade13(const DenseMat& a) {
  const auto& b = kPade13;
  const Index k = a.rows();
  const DenseMat id = DenseMat::Identity(k, k);
  const DenseMat a2 = a * a;
  const DenseMat a4 = a2 * a2;
  const DenseMat a6 = a4 * a2;
  DenseMat inner_u = b[13] * a6 + b[11] * a4 + b[9] * a2;
  DenseMat u = a * (a6 * inner_u + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
  DenseMat inner_v = b[12] * a6 + b[10] * a4 + b[8] * a2;
  DenseMat v = a6 * inner_v + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
  return (v - u).partialPivLu().solve(v + u);
}

}  // namespace

SymmetricMat::SymmetricMat(const DenseMat& m) {
  if (m.rows() != m.cols()) throw DimensionError("SymmetricMat: matrix is not square");
  require_finite(m, "SymmetricMat");
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (m.size() > 0 && asym > 1e-13 * m.norm()) {
    throw InvalidArgument("SymmetricMat: asymmetry " + std::to_string(asym) +
                          " exceeds 1e-13 * ||M||_F");
  }
  m_ = 0.5 * (m + m.transpose());
}

SymmetricMat SymmetricMat::symmetric_part(const DenseMat& m) {
  if (m.rows() != m.cols()) throw DimensionError("SymmetricMat: matrix is not square");
  SymmetricMat s;
  s.m_ = 0.5 * (m + m.transpose());
  return s;
}

DenseMat LowRankFactor::reconstruct() const {
  return z * signature.asDiagonal() * z.transpose();
}

DenseMat expm(const Eigen::Ref<const DenseMat>& m) {
  require_square(m, "expm");
  require_finite(m, "expm");
  require_within_cap(m.rows(), "expm");
  const Index k = m.rows();
  if (k == 0) return DenseMat(0, 0);

  const DenseMat a = m;
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  DenseMat e;
  if (norm1 <= kTheta3) {
    e = pade_low(a, kPade3);
  } else if (norm1 <= kTheta5) {
    e = pade_low(a, kPade5);
  } else if (norm1 <= kTheta7) {
    e = pade_low(a, kPade7);
  } else if (norm1 <= kTheta9) {
    e = pade_low(a, kPade9);
  } else {
    int s = std::max(0, static_cast<int>(std::ceil(std::log2(norm1 / kTheta13))));
    e = pade13(a / std::ldexp(1.0, s));
    for (int i = 0; i < s; ++i) e = e * e;
  }
  if (!e.allFinite()) throw NumericError("expm: overflow");
  return e;
}

DenseMat phi1(const Eigen::Ref<const DenseMat>& m) {
  require_square(m, "phi1");
  const Index k = m.rows();
  DenseMat aug = DenseMat::Zero(2 * k, 2 * k);
  aug.topLeftCorner(k, k) = m;
  aug.topRightCorner(k, k).setIdentity();
  return expm(aug).topRightCorner(k, k);
}

std::pair<DenseMat, Vector> expm_and_phi1_action(const Eigen::Ref<const DenseMat>& m,
                                                 const Eigen::Ref<const Vector>& v) {
  require_square(m, "expm_and_phi1_action");
  const Index k = m.rows();
  if (v.size() != k) throw DimensionError("expm_and_phi1_action: vector length mismatch");
  DenseMat aug = DenseMat::Zero(k + 1, k + 1);
  aug.topLeftCorner(k, k) = m;
  aug.topRightCorner(k, 1) = v;
  const DenseMat e = expm(aug);
  return {e.topLeftCorner(k, k), e.topRightCorner(k, 1)};
}

QuasiTriangularLyapunov::QuasiTriangularLyapunov(DenseMat s) : s_(std::move(s)) {
  const Index k = s_.rows();
  for (Index i = 0; i < k;) {
    const bool two = (i + 1 < k) && s_(i + 1, i) != 0.0;
    blocks_.push_back({i, two ? 2 : 1});
    i += two ? 2 : 1;
  }
  const double scale = std::max(s_.norm(), std::numeric_limits<double>::min());
  const double tol = 1e-13 * scale;
  const std::size_t nb = blocks_.size();
  pair_inverse_.resize(nb * nb);
  for (std::size_t i = 0; i < nb; ++i) {
    for (std::size_t j = i; j < nb; ++j) {
      const Block bi = blocks_[i];
      const Block bj = blocks_[j];
      const DenseMat sii = s_.block(bi.start, bi.start, bi.size, bi.size);
      const DenseMat sjj = s_.block(bj.start, bj.start, bj.size, bj.size);
      // vec(S_ii Y + Y S_jj^T) = (I (x) S_ii + S_jj (x) I) vec(Y), column-major vec.
      DenseMat kron = DenseMat::Zero(bi.size * bj.size, bi.size * bj.size);
      for (Index c = 0; c < bj.size; ++c) {
        kron.block(c * bi.size, c * bi.size, bi.size, bi.size) += sii;
        for (Index d = 0; d < bj.size; ++d) {
          kron.block(c * bi.size, d * bi.size, bi.size, bi.size) +=
              sjj(c, d) * DenseMat::Identity(bi.size, bi.size);
        }
      }
      Eigen::JacobiSVD<DenseMat> svd(kron);
      if (!(svd.singularValues().minCoeff() > tol)) {
        throw IllPosedError(
            "lyap_solve: Lyapunov operator is singular (lambda_i + lambda_j ~ 0)");
      }
      pair_inverse_[i * nb + j] = kron.inverse();
    }
  }
}

DenseMat QuasiTriangularLyapunov::solve(const DenseMat& c) const {
  const Index k = s_.rows();
  if (c.rows() != k || c.cols() != k) throw DimensionError("lyap_solve: rhs shape mismatch");
  DenseMat y = DenseMat::Zero(k, k);
  const std::size_t nb = blocks_.size();
  for (std::size_t jj = nb; jj-- > 0;) {
    const Block bj = blocks_[jj];
    const Index jend = bj.start + bj.size;
    for (std::size_t ii = jj + 1; ii-- > 0;) {
      const Block bi = blocks_[ii];
      const Index iend = bi.start + bi.size;
      DenseMat rhs = c.block(bi.start, bj.start, bi.size, bj.size);
      if (iend < k) {
        rhs.noalias() += s_.block(bi.start, iend, bi.size, k - iend) *
                         y.block(iend, bj.start, k - iend, bj.size);
      }
      if (jend < k) {
        rhs.noalias() += y.block(bi.start, jend, bi.size, k - jend) *
                         s_.block(bj.start, jend, bj.size, k - jend).transpose();
      }
      const DenseMat& inv = pair(ii, jj);
      const Eigen::Map<const Vector> r(rhs.data(), rhs.size());
      const Vector sol = -(inv * r);
      const Eigen::Map<const DenseMat> yb(sol.data(), bi.size, bj.size);
      y.block(bi.start, bj.start, bi.size, bj.size) = yb;
      if (ii != jj) y.block(bj.start, bi.start, bj.size, bi.size) = yb.transpose();
    }
  }
  // Diagonal 2x2 blocks come out symmetric only to roundoff.
  return 0.5 * (y + y.transpose());
}

namespace {

std::pair<DenseMat, DenseMat> real_schur(const DenseMat& t) {
  require_square(t, "lyap_solve");
  require_finite(t, "lyap_solve");
  require_within_cap(t.rows(), "lyap_solve");
  if (t.rows() == 0) return {DenseMat(0, 0), DenseMat(0, 0)};
  Eigen::RealSchur<DenseMat> schur(t);
  if (schur.info() != Eigen::Success) throw NumericError("lyap_solve: Schur decomposition failed");
  return {schur.matrixU(), schur.matrixT()};
}

}  // namespace

LyapunovSolver::LyapunovSolver(const DenseMat& t)
    : LyapunovSolver(real_schur(t)) {}

LyapunovSolver::LyapunovSolver(std::pair<DenseMat, DenseMat> us)
    : u_(std::move(us.first)), s_(std::move(us.second)), core_(s_) {}

SymmetricMat LyapunovSolver::solve(const SymmetricMat& q) const {
  if (q.order() != u_.rows()) throw DimensionError("lyap_solve: Q order differs from T");
  const DenseMat c = u_.transpose() * q.matrix() * u_;
  const DenseMat y = core_.solve(c);
  return SymmetricMat::symmetric_part(u_ * y * u_.transpose());
}

SymmetricMat lyap_solve(const DenseMat& t, const SymmetricMat& q) {
  return LyapunovSolver(t).solve(q);
}

SymmetricMat vanloan_gram(const DenseMat& h, const DenseMat& q, double t) {
  require_square(h, "vanloan_gram");
  if (q.rows() != h.rows() || q.cols() != h.cols()) {
    throw DimensionError("vanloan_gram: Q must have the order of H");
  }
  if (!(t >= 0.0)) throw InvalidArgument("vanloan_gram: t must be >= 0");
  const Index k = h.rows();
  if (t == 0.0 || k == 0) return SymmetricMat::zero(k);

  const double hnorm = h.cwiseAbs().colwise().sum().maxCoeff();
  int doublings = 0;
  if (t * hnorm > 0.5) doublings = static_cast<int>(std::ceil(std::log2(t * hnorm / 0.5)));
  const double tau = std::ldexp(t, -doublings);

  DenseMat block = DenseMat::Zero(2 * k, 2 * k);
  block.topLeftCorner(k, k) = tau * h;
  block.topRightCorner(k, k) = tau * q;
  block.bottomRightCorner(k, k) = -tau * h.transpose();
  const DenseMat e = expm(block);
  // Top-right block is ∫_0^τ e^{(τ-s)H} Q e^{-sH^T} ds; right-multiplying by
  // e^{τH^T} (transpose of the top-left block) gives the Gramian over [0, τ].
  DenseMat f = e.topLeftCorner(k, k);
  DenseMat g = e.topRightCorner(k, k) * f.transpose();
  g = 0.5 * (g + g.transpose());
  for (int i = 0; i < doublings; ++i) {
    g += f * g * f.transpose();
    g = 0.5 * (g + g.transpose());
    f = f * f;
  }
  if (!g.allFinite()) throw NumericError("vanloan_gram: overflow");
  return SymmetricMat::symmetric_part(g);
}

SymmetricMat vanloan_gram(const DenseMat& h, const Vector& q, double t) {
  if (q.size() != h.rows()) throw DimensionError("vanloan_gram: q length differs from H order");
  return vanloan_gram(h, DenseMat(q * q.transpose()), t);
}

SymmetricMat gram_simpson(const DenseMat& h, const DenseMat& q, double t, int panels) {
  require_square(h, "gram_simpson");
  if (panels < 1) throw InvalidArgument("gram_simpson: panels must be >= 1");
  const Index k = h.rows();
  const int nodes = 2 * panels;
  const double dx = t / nodes;
  const DenseMat step = expm(dx * h);
  DenseMat e = DenseMat::Identity(k, k);
  DenseMat acc = DenseMat::Zero(k, k);
  for (int i = 0; i <= nodes; ++i) {
    const double w = (i == 0 || i == nodes) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    acc += w * (e * q * e.transpose());
    e = step * e;
  }
  return SymmetricMat::symmetric_part(acc * (dx / 3.0));
}

double lognorm2(const Eigen::Ref<const DenseMat>& a) {
  require_square(a, "lognorm2");
  require_within_cap(a.rows(), "lognorm2");
  const DenseMat sym = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<DenseMat> eig(sym, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().maxCoeff();
}

LowRankFactor trunc_sym_factor(const SymmetricMat& y, double tol) {
  require_within_cap(y.order(), "trunc_sym_factor");
  const Index k = y.order();
  LowRankFactor out;
  if (k == 0) {
    out.z = DenseMat(0, 0);
    out.signature = Vector(0);
    return out;
  }
  Eigen::SelfAdjointEigenSolver<DenseMat> eig(y.matrix());
  const Vector& lam = eig.eigenvalues();
  std::vector<Index> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return std::abs(lam(a)) > std::abs(lam(b)); });
  const double top = std::abs(lam(order.front()));
  Index rank = 0;
  for (Index idx : order) {
    if (std::abs(lam(idx)) > tol * top && lam(idx) != 0.0) ++rank;
  }
  out.z.resize(k, rank);
  out.signature.resize(rank);
  for (Index c = 0; c < rank; ++c) {
    const Index idx = order[static_cast<std::size_t>(c)];
    out.z.col(c) = eig.eigenvectors().col(idx) * std::sqrt(std::abs(lam(idx)));
    out.signature(c) = lam(idx) < 0.0 ? -1.0 : 1.0;
  }
  return out;
}

}  // namespace krymat
