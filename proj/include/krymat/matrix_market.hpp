#pragma once

#include <filesystem>
#include <variant>

#include "krymat/blockmat.hpp"
#include "krymat/sparse.hpp"

namespace krymat {

/// Matrix Market reader/writer for real matrices.
///
/// Coordinate files become SparseMat, array files become DenseMat. Symmetric
/// files are expanded to full storage. Integer fields are read as real; complex,
/// pattern, skew-symmetric and hermitian files are rejected. Parse failures
/// throw ParseError with the 1-based line number.
using MarketMatrix = std::variant<SparseMat, DenseMat>;

MarketMatrix read_matrix_market(const std::filesystem::path& path);

/// Convenience wrappers: read either storage kind and convert.
SparseMat read_sparse(const std::filesystem::path& path);
DenseMat read_dense(const std::filesystem::path& path);

/// Writes coordinate/general with 17 significant digits.
void write_matrix_market(const std::filesystem::path& path, const SparseMat& m);

/// Writes array/general (column-major) with 17 significant digits.
void write_matrix_market(const std::filesystem::path& path, const DenseMat& m);

}  // namespace krymat
