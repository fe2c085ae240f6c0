#pragma once

#include <vector>

#include "krymat/blockmat.hpp"

namespace krymat {

/// Uniform grid t_k = t0 + k h, h = (Tf - t0) / N, k = 0..N.
class TimeGrid {
 public:
  TimeGrid(double t0, double tf, Index steps);

  double t0() const noexcept { return t0_; }
  double tf() const noexcept { return tf_; }
  Index steps() const noexcept { return steps_; }
  Index nodes() const noexcept { return steps_ + 1; }
  double step() const noexcept { return (tf_ - t0_) / static_cast<double>(steps_); }

  /// t_k; the last node is exactly Tf.
  double node(Index k) const;

  std::vector<double> all_nodes() const;

 private:
  double t0_;
  double tf_;
  Index steps_;
};

}  // namespace krymat
