#pragma once

#include <filesystem>
#include <variant>

#include "krymat/problems.hpp"

namespace krymat {

/// A problem bundle is a directory holding Matrix Market members and a
/// `manifest.json` naming them:
///
///   {"kind": "dle", "t0": 0, "Tf": 1, "A": "A.mtx", "B": "B.mtx", "Z0": "Z0.mtx"}
///   {"kind": "gen-sylvester", "t0": 0, "Tf": 1, "C": "C.mtx", "X0": "X0.mtx",
///    "terms": [{"A": "A1.mtx", "B": "B1.mtx"}, ...]}
///
/// Z0 and X0 are optional (zero when absent).
using BundleProblem = std::variant<DLEProblem, GenSylvesterProblem>;

constexpr const char* kManifestName = "manifest.json";

void write_bundle(const std::filesystem::path& dir, const DLEProblem& p);
void write_bundle(const std::filesystem::path& dir, const GenSylvesterProblem& p);

BundleProblem read_bundle(const std::filesystem::path& dir);

}  // namespace krymat
