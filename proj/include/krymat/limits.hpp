#pragma once

#include <Eigen/Core>

namespace krymat {

/// Largest order on which dense O(k^3) kernels and the dense oracles operate.
/// Defaults to 2000; the environment variable KRYMAT_DENSE_CAP overrides it.
Eigen::Index dense_cap();

/// Overrides the cap for the current process (tests, CLI).
void set_dense_cap(Eigen::Index cap);

/// Throws CapExceededError when `order` exceeds dense_cap().
void require_within_cap(Eigen::Index order, const char* what);

}  // namespace krymat
