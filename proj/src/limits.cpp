#include "krymat/limits.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#include "krymat/errors.hpp"

namespace krymat {
namespace {

Eigen::Index cap_from_env() {
  const char* env = std::getenv("KRYMAT_DENSE_CAP");
  if (env == nullptr || *env == '\0') return 2000;
  char* end = nullptr;
  const long long v = std::strtoll(env, &end, 10);
  if (end == env || *end != '\0' || v <= 0) return 2000;
  return static_cast<Eigen::Index>(v);
}

std::atomic<Eigen::Index>& cap_storage() {
  static std::atomic<Eigen::Index> cap{cap_from_env()};
  return cap;
}

}  // namespace

Eigen::Index dense_cap() { return cap_storage().load(); }

void set_dense_cap(Eigen::Index cap) {
  if (cap <= 0) throw InvalidArgument("dense cap must be positive");
  cap_storage().store(cap);
}

void require_within_cap(Eigen::Index order, const char* what) {
  if (order > dense_cap()) {
    throw CapExceededError(std::string(what) + ": order " + std::to_string(order) +
                           " exceeds dense cap " + std::to_string(dense_cap()));
  }
}

}  // namespace krymat
