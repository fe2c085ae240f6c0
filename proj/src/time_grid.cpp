#include "krymat/time_grid.hpp"

#include <cmath>

#include "krymat/errors.hpp"

namespace krymat {

TimeGrid::TimeGrid(double t0, double tf, Index steps) : t0_(t0), tf_(tf), steps_(steps) {
  if (!std::isfinite(t0) || !std::isfinite(tf) || !(t0 < tf)) {
    throw InvalidArgument("TimeGrid: need finite t0 < Tf");
  }
  if (steps < 1) throw InvalidArgument("TimeGrid: need at least one step");
}

double TimeGrid::node(Index k) const {
  if (k < 0 || k > steps_) throw InvalidArgument("TimeGrid::node: index out of range");
  if (k == steps_) return tf_;
  return t0_ + static_cast<double>(k) * step();
}

std::vector<double> TimeGrid::all_nodes() const {
  std::vector<double> out(static_cast<std::size_t>(nodes()));
  for (Index k = 0; k < nodes(); ++k) out[static_cast<std::size_t>(k)] = node(k);
  return out;
}

}  // namespace krymat
