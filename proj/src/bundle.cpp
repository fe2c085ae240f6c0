#include "krymat/bundle.hpp"

#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "krymat/errors.hpp"
#include "krymat/matrix_market.hpp"

namespace krymat {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
}

void write_manifest(const fs::path& dir, const json& manifest) {
  std::ofstream out(dir / kManifestName, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write manifest in '" + dir.string() + "'");
  out << manifest.dump(2) << '\n';
}

std::string member(const json& j, const char* key, const fs::path& manifest) {
  if (!j.contains(key) || !j.at(key).is_string()) {
    throw IoError(manifest.string() + ": missing string member '" + key + "'");
  }
  return j.at(key).get<std::string>();
}

double scalar(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw IoError(std::string("manifest: '") + key + "' must be a number");
  return j.at(key).get<double>();
}

}  // namespace

void write_bundle(const fs::path& dir, const DLEProblem& p) {
  ensure_dir(dir);
  json m;
  m["kind"] = "dle";
  m["t0"] = p.t0;
  m["Tf"] = p.tf;
  m["A"] = "A.mtx";
  m["B"] = "B.mtx";
  write_matrix_market(dir / "A.mtx", p.a);
  write_matrix_market(dir / "B.mtx", p.b);
  if (p.z0.cols() > 0) {
    m["Z0"] = "Z0.mtx";
    write_matrix_market(dir / "Z0.mtx", p.z0);
  }
  write_manifest(dir, m);
}

void write_bundle(const fs::path& dir, const GenSylvesterProblem& p) {
  ensure_dir(dir);
  json m;
  m["kind"] = "gen-sylvester";
  m["t0"] = p.t0;
  m["Tf"] = p.tf;
  m["C"] = "C.mtx";
  write_matrix_market(dir / "C.mtx", p.c);
  if (p.x0.size() > 0 && p.x0.norm() > 0.0) {
    m["X0"] = "X0.mtx";
    write_matrix_market(dir / "X0.mtx", p.x0);
  }
  json terms = json::array();
  for (std::size_t i = 0; i < p.a.size(); ++i) {
    const std::string a_name = "A" + std::to_string(i + 1) + ".mtx";
    const std::string b_name = "B" + std::to_string(i + 1) + ".mtx";
    write_matrix_market(dir / a_name, p.a[i]);
    write_matrix_market(dir / b_name, p.b[i]);
    terms.push_back({{"A", a_name}, {"B", b_name}});
  }
  m["terms"] = terms;
  write_manifest(dir, m);
}

BundleProblem read_bundle(const fs::path& dir) {
  const fs::path manifest_path = dir / kManifestName;
  std::ifstream in(manifest_path);
  if (!in) throw IoError("cannot open '" + manifest_path.string() + "'");
  json m;
  try {
    in >> m;
  } catch (const json::parse_error& e) {
    throw IoError(manifest_path.string() + ": " + e.what());
  }
  const std::string kind = member(m, "kind", manifest_path);
  const double t0 = scalar(m, "t0", 0.0);
  const double tf = scalar(m, "Tf", 1.0);

  if (kind == "dle") {
    DLEProblem p;
    p.a = read_sparse(dir / member(m, "A", manifest_path));
    p.b = read_dense(dir / member(m, "B", manifest_path));
    p.z0 = m.contains("Z0") ? read_dense(dir / member(m, "Z0", manifest_path)) : DenseMat(p.a.rows(), 0);
    p.t0 = t0;
    p.tf = tf;
    p.validate();
    return p;
  }
  if (kind == "gen-sylvester") {
    GenSylvesterProblem p;
    p.c = read_dense(dir / member(m, "C", manifest_path));
    p.x0 = m.contains("X0") ? read_dense(dir / member(m, "X0", manifest_path))
                            : DenseMat::Zero(p.c.rows(), p.c.cols());
    if (!m.contains("terms") || !m.at("terms").is_array()) {
      throw IoError(manifest_path.string() + ": missing array member 'terms'");
    }
    for (const auto& term : m.at("terms")) {
      p.a.push_back(read_sparse(dir / member(term, "A", manifest_path)));
      p.b.push_back(read_sparse(dir / member(term, "B", manifest_path)));
    }
    p.t0 = t0;
    p.tf = tf;
    p.validate();
    return p;
  }
  throw IoError(manifest_path.string() + ": unknown problem kind '" + kind + "'");
}

}  // namespace krymat
