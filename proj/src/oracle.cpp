#include "krymat/oracle.hpp"

#include "krymat/errors.hpp"
#include "krymat/limits.hpp"
#include "krymat/smallmat.hpp"

namespace krymat {

DenseMat kron_operator(const GenSylvesterProblem& problem) {
  problem.validate();
  const Index n = problem.n();
  const Index p = problem.p();
  require_within_cap(n * p, "kron_operator");
  DenseMat m = DenseMat::Zero(n * p, n * p);
  for (std::size_t i = 0; i < problem.a.size(); ++i) {
    const DenseMat a(problem.a[i]);
    const DenseMat b(problem.b[i]);
    // Block (r, c) of B^T (x) A is B(c, r) A.
    for (Index r = 0; r < p; ++r) {
      for (Index c = 0; c < p; ++c) {
        if (b(c, r) != 0.0) m.block(r * n, c * n, n, n) += b(c, r) * a;
      }
    }
  }
  return m;
}

std::vector<DenseMat> dense_dme_solve(const GenSylvesterProblem& problem, const TimeGrid& grid) {
  const Index n = problem.n();
  const Index p = problem.p();
  require_within_cap(n * p, "dense_dme_solve");
  const DenseMat m = kron_operator(problem);
  const Vector b = Eigen::Map<const Vector>(problem.c.data(), n * p);
  const double h = grid.step();
  const auto [e, phi_b] = expm_and_phi1_action(h * m, b);
  const Vector step_b = h * phi_b;

  std::vector<DenseMat> out;
  out.reserve(static_cast<std::size_t>(grid.nodes()));
  Vector x = Eigen::Map<const Vector>(problem.x0.data(), n * p);
  out.push_back(problem.x0);
  for (Index k = 0; k < grid.steps(); ++k) {
    x = e * x + step_b;
    out.push_back(Eigen::Map<const DenseMat>(x.data(), n, p));
  }
  return out;
}

std::vector<DenseMat> dense_dle_exact(const DLEProblem& problem, const TimeGrid& grid) {
  problem.validate();
  const Index n = problem.n();
  require_within_cap(n, "dense_dle_exact");
  const DenseMat a(problem.a);
  const double h = grid.step();
  const DenseMat e = expm(h * a);
  const DenseMat g = vanloan_gram(a, DenseMat(problem.b * problem.b.transpose()), h).matrix();

  std::vector<DenseMat> out;
  out.reserve(static_cast<std::size_t>(grid.nodes()));
  DenseMat x = problem.zero_initial() ? DenseMat::Zero(n, n) : DenseMat(problem.z0 * problem.z0.transpose());
  out.push_back(x);
  for (Index k = 0; k < grid.steps(); ++k) {
    x = e * x * e.transpose() + g;
    x = 0.5 * (x + x.transpose());
    out.push_back(x);
  }
  return out;
}

}  // namespace krymat
