#include "krymat/generators.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <vector>

#include "krymat/errors.hpp"

namespace krymat {

double Rng::uniform() {
  // 53 random bits -> [0, 1).
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(angle);
  has_spare_ = true;
  return r * std::cos(angle);
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw InvalidArgument("Rng::below: empty range");
  // Rejection sampling keeps the result unbiased.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return x % n;
}

DenseMat Rng::normal_matrix(Index rows, Index cols) {
  DenseMat m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = normal();
  }
  return m;
}

SparseMat gen_laplacian2d(Index n0) {
  if (n0 < 2) throw InvalidArgument("gen_laplacian2d: n0 must be >= 2");
  const Index n = n0 * n0;
  const double s = static_cast<double>((n0 + 1) * (n0 + 1));
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(5 * n));
  auto id = [n0](Index i, Index j) { return static_cast<int>(i * n0 + j); };
  for (Index i = 0; i < n0; ++i) {
    for (Index j = 0; j < n0; ++j) {
      const int row = id(i, j);
      trips.emplace_back(row, row, -4.0 * s);
      if (i > 0) trips.emplace_back(row, id(i - 1, j), s);
      if (i + 1 < n0) trips.emplace_back(row, id(i + 1, j), s);
      if (j > 0) trips.emplace_back(row, id(i, j - 1), s);
      if (j + 1 < n0) trips.emplace_back(row, id(i, j + 1), s);
    }
  }
  SparseMat a(n, n);
  a.setFromTriplets(trips.begin(), trips.end());
  a.makeCompressed();
  return a;
}

namespace {

SparseMat random_stable_impl(Index n, std::uint64_t seed, bool symmetric) {
  if (n < 1) throw InvalidArgument("gen_random_stable: n must be >= 1");
  Rng rng(seed);
  std::map<std::pair<Index, Index>, double> entries;
  const Index per_row = std::min<Index>(4, n - 1);
  for (Index i = 0; i < n; ++i) {
    for (Index k = 0; k < per_row; ++k) {
      Index j = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n - 1)));
      if (j >= i) ++j;
      const double v = rng.uniform(-1.0, 1.0);
      entries[{i, j}] += v;
      if (symmetric) entries[{j, i}] += v;
    }
  }
  // Row sums of |sym(A)| off the diagonal.
  std::vector<double> radius(static_cast<std::size_t>(n), 0.0);
  std::map<std::pair<Index, Index>, double> sym;
  for (const auto& [ij, v] : entries) {
    sym[{ij.first, ij.second}] += 0.5 * v;
    sym[{ij.second, ij.first}] += 0.5 * v;
  }
  for (const auto& [ij, v] : sym) radius[static_cast<std::size_t>(ij.first)] += std::abs(v);

  std::vector<Eigen::Triplet<double>> trips;
  for (const auto& [ij, v] : entries) {
    trips.emplace_back(static_cast<int>(ij.first), static_cast<int>(ij.second), v);
  }
  for (Index i = 0; i < n; ++i) {
    trips.emplace_back(static_cast<int>(i), static_cast<int>(i),
                       -(1.0 + radius[static_cast<std::size_t>(i)] + rng.uniform()));
  }
  SparseMat a(n, n);
  a.setFromTriplets(trips.begin(), trips.end());
  a.makeCompressed();
  return a;
}

}  // namespace

SparseMat gen_random_stable(Index n, std::uint64_t seed) { return random_stable_impl(n, seed, false); }

SparseMat gen_random_stable_symmetric(Index n, std::uint64_t seed) {
  return random_stable_impl(n, seed, true);
}

GenSylvesterProblem gen_sylvester_q2(Index n, Index p, std::uint64_t seed) {
  if (n < 1 || p < 1) throw InvalidArgument("gen_sylvester_q2: n and p must be >= 1");
  GenSylvesterProblem prob;
  prob.a = {gen_random_stable(n, seed), sparse_identity(n)};
  // B2 enters as X B2, i.e. as B2^T on vec(X); any stable matrix works.
  prob.b = {sparse_identity(p), gen_random_stable(p, seed + 1)};
  Rng rng(seed + 2);
  prob.c = rng.normal_matrix(n, p);
  prob.x0 = DenseMat::Zero(n, p);
  prob.t0 = 0.0;
  prob.tf = 1.0;
  return prob;
}

DLEProblem gen_laplacian_dle(Index n0, Index p, std::uint64_t seed, double t0, double tf) {
  DLEProblem prob;
  prob.a = gen_laplacian2d(n0);
  Rng rng(seed);
  prob.b = rng.normal_matrix(prob.a.rows(), p);
  prob.z0 = DenseMat(prob.a.rows(), 0);
  prob.t0 = t0;
  prob.tf = tf;
  return prob;
}

}  // namespace krymat
