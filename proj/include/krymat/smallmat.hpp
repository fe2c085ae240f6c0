#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>

#include "krymat/blockmat.hpp"

namespace krymat {

/// Symmetric k x k matrix. Construction rejects inputs whose asymmetry exceeds
/// 1e-13 * ||M||_F and stores the symmetric part.
class SymmetricMat {
 public:
  SymmetricMat() = default;
  explicit SymmetricMat(const DenseMat& m);

  /// Stores (M + M^T)/2 without checking the asymmetry.
  static SymmetricMat symmetric_part(const DenseMat& m);
  static SymmetricMat zero(Index k) { return symmetric_part(DenseMat::Zero(k, k)); }

  Index order() const noexcept { return m_.rows(); }
  const DenseMat& matrix() const noexcept { return m_; }
  operator const DenseMat&() const noexcept { return m_; }
  double operator()(Index i, Index j) const { return m_(i, j); }

 private:
  DenseMat m_;
};

/// Y ~= Z diag(signature) Z^T, columns ordered by decreasing |eigenvalue|.
struct LowRankFactor {
  DenseMat z;          ///< k x r
  Vector signature;    ///< r entries, each +1 or -1

  Index order() const noexcept { return z.rows(); }
  Index rank() const noexcept { return z.cols(); }
  DenseMat reconstruct() const;
};

/// e^M by scaling and squaring with diagonal Pade approximants (degrees 3..13).
DenseMat expm(const Eigen::Ref<const DenseMat>& m);

/// psi_1(M) = (e^M - I) M^{-1}, read off the exponential of [[M, I], [0, 0]].
DenseMat phi1(const Eigen::Ref<const DenseMat>& m);

/// Returns (e^M, psi_1(M) v) from one exponential of the (k+1)-order augmented
/// matrix [[M, v], [0, 0]].
std::pair<DenseMat, Vector> expm_and_phi1_action(const Eigen::Ref<const DenseMat>& m,
                                                 const Eigen::Ref<const Vector>& v);

/// Solver for S Y + Y S^T + C = 0 with S upper quasi-triangular (real Schur form).
/// The small diagonal-block systems are factorized once, so repeated solves with
/// the same S cost one back-substitution each.
class QuasiTriangularLyapunov {
 public:
  explicit QuasiTriangularLyapunov(DenseMat s);

  Index order() const noexcept { return s_.rows(); }

  /// Solves for symmetric C; the result is exactly symmetric.
  DenseMat solve(const DenseMat& c) const;

 private:
  struct Block {
    Index start;
    Index size;
  };
  DenseMat s_;
  std::vector<Block> blocks_;
  // For each pair (i <= j) of diagonal blocks: inverse of the Kronecker system
  // I (x) S_ii + S_jj (x) I (at most 4x4).
  std::vector<DenseMat> pair_inverse_;

  const DenseMat& pair(std::size_t i, std::size_t j) const {
    return pair_inverse_[i * blocks_.size() + j];
  }
};

/// Bartels-Stewart solver for T Y + Y T^T + Q = 0. The real Schur form of T is
/// computed once at construction.
class LyapunovSolver {
 public:
  explicit LyapunovSolver(const DenseMat& t);

  SymmetricMat solve(const SymmetricMat& q) const;

  const DenseMat& schur_vectors() const noexcept { return u_; }
  const DenseMat& schur_form() const noexcept { return s_; }

 private:
  explicit LyapunovSolver(std::pair<DenseMat, DenseMat> schur);

  DenseMat u_;
  DenseMat s_;
  QuasiTriangularLyapunov core_;
};

/// Solves T Y + Y T^T + Q = 0. Throws IllPosedError if some lambda_i + lambda_j ~ 0.
SymmetricMat lyap_solve(const DenseMat& t, const SymmetricMat& q);

/// Computes ∫_0^t e^{sH} Q e^{sH^T} ds for symmetric Q from the block exponential
/// of [[H, Q], [0, -H^T]] over a short interval, then doubles the interval with
/// G(2τ) = G(τ) + e^{τH} G(τ) e^{τH^T}. The doubling keeps stiff H stable.
SymmetricMat vanloan_gram(const DenseMat& h, const DenseMat& q, double t);
SymmetricMat vanloan_gram(const DenseMat& h, const Vector& q, double t);

/// Composite Simpson rule for the same integral (cross-validation only).
SymmetricMat gram_simpson(const DenseMat& h, const DenseMat& q, double t, int panels);

/// mu_2(A) = lambda_max((A + A^T) / 2).
double lognorm2(const Eigen::Ref<const DenseMat>& a);

/// Keeps eigenpairs with |lambda| > tol * max|lambda|; Z = U diag(sqrt|lambda|).
LowRankFactor trunc_sym_factor(const SymmetricMat& y, double tol);

}  // namespace krymat
