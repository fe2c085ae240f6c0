#pragma once

#include <limits>
#include <string>
#include <vector>

#include "krymat/blockmat.hpp"
#include "krymat/smallmat.hpp"
#include "krymat/time_grid.hpp"

namespace krymat {

/// Small projected solution y_m(t_k), one vector per grid node.
struct KernelTrajectoryVec {
  TimeGrid grid;
  std::vector<Vector> samples;
};

/// Small symmetric projected solution Y_m(t_k) (or G_m(t_k)), one per grid node.
struct KernelTrajectorySym {
  TimeGrid grid;
  std::vector<SymmetricMat> samples;
};

/// X_m(t_k) = V (Y_k (x) I_p) V^T, with Y_k optionally factored as
/// z_k diag(signature) z_k^T.
struct LowRankSolution {
  BlockBasis basis;
  KernelTrajectorySym kernel;
  std::vector<LowRankFactor> factors;  ///< small factors of Y_k (may be empty)

  Index nodes() const { return static_cast<Index>(kernel.samples.size()); }
  /// n x (r p) factor W with X_m(t_k) = W diag(signature (x) 1_p) W^T.
  DenseMat factor(Index k) const;
  /// Signature of factor(k), one entry per column.
  Vector factor_signature(Index k) const;
  /// Dense X_m(t_k); refuses n above the dense cap.
  DenseMat dense(Index k) const;
};

/// X_m(t_k) = X_0 + V (y_k (x) I_p).
struct GalerkinSolution {
  BlockBasis basis;
  KernelTrajectoryVec kernel;
  DenseMat x0;

  Index nodes() const { return static_cast<Index>(kernel.samples.size()); }
  DenseMat at(Index k) const;
};

struct ReportRow {
  Index m = 0;
  double t = 0.0;
  double residual_bound = 0.0;
  double apriori_bound = std::numeric_limits<double>::quiet_NaN();
  Index rank = -1;
};

struct SolveReport {
  std::string method;
  std::vector<ReportRow> rows;     ///< per m, per probed node
  std::vector<double> max_bound;   ///< max over probed nodes, per m
  Index n = 0;
  Index p = 0;
  Index m = 0;                     ///< basis blocks at exit
  Index basis_dim = 0;             ///< width-p blocks in the basis at exit
  bool converged = false;
  bool breakdown = false;
  double seconds = 0.0;
  std::vector<std::string> warnings;
};

}  // namespace krymat
