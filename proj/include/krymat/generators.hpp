#pragma once

#include <cstdint>
#include <random>

#include "krymat/blockmat.hpp"
#include "krymat/problems.hpp"
#include "krymat/sparse.hpp"

namespace krymat {

/// Deterministic random source. The mapping from the 64-bit engine to doubles is
/// done here rather than with <random> distributions so that generated problems
/// are bit-identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform();
  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal (Box-Muller).
  double normal();
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  DenseMat normal_matrix(Index rows, Index cols);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// 5-point Dirichlet Laplacian on the unit square with n0 interior points per
/// side, scaled by (n0+1)^2 and negated so all eigenvalues are negative.
SparseMat gen_laplacian2d(Index n0);

/// Sparse n x n matrix with about four random off-diagonal entries per row and a
/// diagonal chosen so that mu_2(A) <= -1 (Gershgorin on the symmetric part).
SparseMat gen_random_stable(Index n, std::uint64_t seed);

/// Symmetric variant of gen_random_stable (A = A^T, all eigenvalues <= -1).
SparseMat gen_random_stable_symmetric(Index n, std::uint64_t seed);

/// Sylvester-form instance with q = 2: A1 random stable (n x n), B1 = I_p,
/// A2 = I_n, B2 random stable (p x p), C standard normal, X0 = 0, [t0, Tf] = [0, 1].
GenSylvesterProblem gen_sylvester_q2(Index n, Index p, std::uint64_t seed);

/// Laplacian DLE instance: A = gen_laplacian2d(n0), B standard normal n x p, X0 = 0.
DLEProblem gen_laplacian_dle(Index n0, Index p, std::uint64_t seed, double t0 = 0.0, double tf = 1.0);

}  // namespace krymat
