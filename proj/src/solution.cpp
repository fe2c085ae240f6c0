#include "krymat/solution.hpp"

#include "krymat/errors.hpp"
#include "krymat/limits.hpp"

namespace krymat {

DenseMat LowRankSolution::factor(Index k) const {
  if (k < 0 || k >= static_cast<Index>(factors.size())) throw InvalidArgument("LowRankSolution::factor: no such node");
  return kron_apply(basis.row(), factors[static_cast<std::size_t>(k)].z).data();
}

Vector LowRankSolution::factor_signature(Index k) const {
  if (k < 0 || k >= static_cast<Index>(factors.size())) {
    throw InvalidArgument("LowRankSolution::factor_signature: no such node");
  }
  const Vector& sig = factors[static_cast<std::size_t>(k)].signature;
  const Index p = basis.block_width();
  Vector out(sig.size() * p);
  for (Index i = 0; i < sig.size(); ++i) out.segment(i * p, p).setConstant(sig(i));
  return out;
}

DenseMat LowRankSolution::dense(Index k) const {
  if (k < 0 || k >= nodes()) throw InvalidArgument("LowRankSolution::dense: no such node");
  require_within_cap(basis.rows(), "LowRankSolution::dense");
  const DenseMat& y = kernel.samples[static_cast<std::size_t>(k)].matrix();
  const DenseMat vy = kron_apply(basis.row(), y).data();
  DenseMat x = vy * basis.row().data().transpose();
  return 0.5 * (x + x.transpose());
}

DenseMat GalerkinSolution::at(Index k) const {
  if (k < 0 || k >= nodes()) throw InvalidArgument("GalerkinSolution::at: no such node");
  const Vector& y = kernel.samples[static_cast<std::size_t>(k)];
  if (basis.blocks() == 0) return x0;
  return x0 + kron_apply_vec(basis.row(), y);
}

}  // namespace krymat
