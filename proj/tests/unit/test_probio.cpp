#include <doctest.h>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include <unistd.h>

#include "krymat/bundle.hpp"
#include "krymat/errors.hpp"
#include "krymat/generators.hpp"
#include "krymat/matrix_market.hpp"
#include "krymat/problems.hpp"
#include "krymat/sparse.hpp"
#include "krymat/time_grid.hpp"
#include "oracles.hpp"

using namespace krymat;
using krymat::testing::Mat;
using krymat::testing::Vec;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static std::atomic<int> counter{0};
    path = fs::temp_directory_path() /
           ("krymat_probio_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path file(const std::string& name, const std::string& text) const {
    const fs::path p = path / name;
    std::ofstream(p) << text;
    return p;
  }
};

SparseMat diag_sparse(const Vec& d) { return sparse_from_dense(Mat(d.asDiagonal())); }

GenSylvesterProblem random_gsylv(Rng& rng, Index n, Index p, Index q) {
  GenSylvesterProblem prob;
  for (Index i = 0; i < q; ++i) {
    prob.a.push_back(sparse_from_dense(rng.normal_matrix(n, n)));
    prob.b.push_back(sparse_from_dense(rng.normal_matrix(p, p)));
  }
  prob.c = rng.normal_matrix(n, p);
  prob.x0 = Mat::Zero(n, p);
  return prob;
}

}  // namespace

TEST_CASE("gsylv_apply") {
  Rng rng(1);
  SUBCASE("identity terms") {
    GenSylvesterProblem prob;
    prob.a.push_back(sparse_identity(4));
    prob.b.push_back(sparse_identity(2));
    prob.c = Mat::Ones(4, 2);
    prob.x0 = Mat::Zero(4, 2);
    const Mat x = rng.normal_matrix(4, 2);
    CHECK((gsylv_apply(prob, x) - x).norm() == 0.0);
  }
  SUBCASE("diagonal terms") {
    const Vec a = rng.normal_matrix(4, 1);
    const Vec b = rng.normal_matrix(3, 1);
    GenSylvesterProblem prob;
    prob.a.push_back(diag_sparse(a));
    prob.b.push_back(diag_sparse(b));
    prob.c = Mat::Ones(4, 3);
    prob.x0 = Mat::Zero(4, 3);
    const Mat x = rng.normal_matrix(4, 3);
    const Mat y = gsylv_apply(prob, x);
    for (Index i = 0; i < 4; ++i) {
      for (Index j = 0; j < 3; ++j) CHECK(y(i, j) == doctest::Approx(a(i) * x(i, j) * b(j)));
    }
  }
  SUBCASE("Kronecker form") {
    const GenSylvesterProblem prob = random_gsylv(rng, 5, 3, 2);
    Mat m = Mat::Zero(15, 15);
    for (Index i = 0; i < 2; ++i) m += testing::kron(Mat(prob.b[i]).transpose(), Mat(prob.a[i]));
    const Mat x = rng.normal_matrix(5, 3);
    const Vec ref = m * testing::vec(x);
    CHECK((testing::vec(gsylv_apply(prob, x)) - ref).norm() <= 1e-13 * ref.norm());

    // Adjoint in the Frobenius inner product.
    const Mat y = rng.normal_matrix(5, 3);
    const double lhs = (gsylv_apply(prob, x).array() * y.array()).sum();
    const double rhs = (x.array() * gsylv_apply_transpose(prob, y).array()).sum();
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
  SUBCASE("linearity") {
    for (int trial = 0; trial < 10; ++trial) {
      const GenSylvesterProblem prob = random_gsylv(rng, 6, 2, 3);
      const Mat x = rng.normal_matrix(6, 2);
      const Mat y = rng.normal_matrix(6, 2);
      const double alpha = rng.normal();
      const Mat lhs = gsylv_apply(prob, alpha * x + y);
      const Mat rhs = alpha * gsylv_apply(prob, x) + gsylv_apply(prob, y);
      CHECK((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
    }
  }
  SUBCASE("shape errors") {
    const GenSylvesterProblem prob = random_gsylv(rng, 5, 3, 1);
    CHECK_THROWS_AS(gsylv_apply(prob, Mat::Zero(5, 2)), DimensionError);
    GenSylvesterProblem bad = prob;
    bad.b[0] = sparse_identity(2);
    CHECK_THROWS_AS(bad.validate(), DimensionError);
    GenSylvesterProblem times = prob;
    times.tf = times.t0;
    CHECK_THROWS_AS(times.validate(), InvalidArgument);
  }
}

TEST_CASE("problem validation warnings") {
  GenSylvesterProblem prob;
  prob.a.push_back(sparse_identity(4));
  prob.b.push_back(sparse_identity(2));
  prob.c = Mat::Zero(4, 2);
  prob.c.col(0).setOnes();
  prob.c.col(1).setOnes();
  prob.x0 = Mat::Zero(4, 2);
  CHECK_FALSE(prob.validate().empty());

  DLEProblem dle;
  dle.a = gen_laplacian2d(5);
  Rng rng(9);
  dle.b = rng.normal_matrix(25, 2);
  CHECK(dle.validate().empty());
  dle.b.col(1) = dle.b.col(0);
  CHECK(dle.validate().size() == 1);
  dle.b = rng.normal_matrix(25, 3);
  CHECK(dle.validate().size() == 1);
  dle.b = rng.normal_matrix(24, 1);
  CHECK_THROWS_AS(dle.validate(), DimensionError);
}

TEST_CASE("LinearSolver") {
  SUBCASE("identity") {
    const LinearSolver solver(sparse_identity(5));
    Rng rng(2);
    const Mat w = rng.normal_matrix(5, 3);
    CHECK((solve_with(solver, w) - w).norm() == 0.0);
  }
  SUBCASE("diagonal") {
    const LinearSolver solver(diag_sparse(Vec::Constant(6, 2.0)));
    CHECK((solve_with(solver, Mat::Ones(6, 2)) - 0.5 * Mat::Ones(6, 2)).norm() == 0.0);
  }
  SUBCASE("random sparse SPD") {
    const SparseMat a = gen_random_stable_symmetric(50, 3);
    const SparseMat spd = -a;
    const LinearSolver solver(spd);
    Rng rng(3);
    const Mat w = rng.normal_matrix(50, 4);
    const Mat x = solver.solve(w);
    CHECK((spd * x - w).norm() <= 1e-10 * w.norm());
  }
  SUBCASE("singular matrix is rejected") {
    Mat s = Mat::Identity(4, 4);
    s(2, 2) = 0.0;
    CHECK_THROWS_AS(LinearSolver(sparse_from_dense(s)), FactorizationError);
    Mat dup = Mat::Ones(3, 3);
    CHECK_THROWS_AS(LinearSolver(sparse_from_dense(dup)), FactorizationError);
  }
  CHECK_THROWS_AS(LinearSolver(sparse_from_dense(Mat::Ones(2, 3))), DimensionError);
}

TEST_CASE("Matrix Market") {
  TempDir tmp;
  SUBCASE("coordinate general") {
    const fs::path p = tmp.file("a.mtx",
                                "%%MatrixMarket matrix coordinate real general\n"
                                "% comment\n"
                                "2 2 2\n"
                                "1 1 3.0\n"
                                "2 2 4.0\n");
    const SparseMat a = read_sparse(p);
    CHECK(a.rows() == 2);
    CHECK(Mat(a)(0, 0) == 3.0);
    CHECK(Mat(a)(1, 1) == 4.0);
    CHECK(Mat(a)(0, 1) == 0.0);
  }
  SUBCASE("symmetric is mirrored") {
    const fs::path p = tmp.file("s.mtx",
                                "%%MatrixMarket matrix coordinate real symmetric\n"
                                "2 2 3\n"
                                "1 1 1.0\n"
                                "2 1 5.0\n"
                                "2 2 2.0\n");
    const Mat a = read_dense(p);
    Mat expected(2, 2);
    expected << 1, 5, 5, 2;
    CHECK((a - expected).norm() == 0.0);
    write_matrix_market(tmp.path / "s_dense.mtx", a);
    CHECK((read_dense(tmp.path / "s_dense.mtx") - a).norm() == 0.0);
  }
  SUBCASE("integer field and array symmetric") {
    const fs::path p = tmp.file("i.mtx",
                                "%%MatrixMarket matrix array integer symmetric\n"
                                "2 2\n"
                                "1\n"
                                "7\n"
                                "3\n");
    const Mat a = read_dense(p);
    Mat expected(2, 2);
    expected << 1, 7, 7, 3;
    CHECK((a - expected).norm() == 0.0);
  }
  SUBCASE("rejections carry the line number") {
    const fs::path complex = tmp.file("c.mtx", "%%MatrixMarket matrix array complex general\n1 1\n1 0\n");
    CHECK_THROWS_AS(read_matrix_market(complex), ParseError);
    const fs::path bad = tmp.file("b.mtx",
                                  "%%MatrixMarket matrix coordinate real general\n"
                                  "2 2 2\n"
                                  "1 1 3.0\n"
                                  "3 1 4.0\n");
    try {
      read_matrix_market(bad);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 4);
    }
    const fs::path short_file = tmp.file("t.mtx",
                                         "%%MatrixMarket matrix coordinate real general\n"
                                         "2 2 3\n"
                                         "1 1 3.0\n");
    CHECK_THROWS_AS(read_matrix_market(short_file), ParseError);
    const fs::path header = tmp.file("h.mtx", "%%MatrixMarket tensor coordinate real general\n1 1 0\n");
    CHECK_THROWS_AS(read_matrix_market(header), ParseError);
    CHECK_THROWS_AS(read_matrix_market(tmp.path / "missing.mtx"), IoError);
  }
  SUBCASE("round trip to 17 digits") {
    Rng rng(4);
    const Mat d = rng.normal_matrix(7, 3) * 1e-7;
    write_matrix_market(tmp.path / "d.mtx", d);
    CHECK((read_dense(tmp.path / "d.mtx").array() == d.array()).all());

    const SparseMat s = gen_random_stable(30, 5);
    write_matrix_market(tmp.path / "sp.mtx", s);
    const SparseMat back = read_sparse(tmp.path / "sp.mtx");
    CHECK(back.nonZeros() == s.nonZeros());
    CHECK((Mat(back).array() == Mat(s).array()).all());
  }
}

TEST_CASE("generators") {
  SUBCASE("Laplacian n0 = 2") {
    const Mat a(gen_laplacian2d(2));
    Mat expected(4, 4);
    expected << -36, 9, 9, 0,  //
        9, -36, 0, 9,          //
        9, 0, -36, 9,          //
        0, 9, 9, -36;
    CHECK((a - expected).norm() == 0.0);
  }
  SUBCASE("Laplacian n0 = 10") {
    const SparseMat s = gen_laplacian2d(10);
    const Mat a(s);
    CHECK((a - a.transpose()).norm() == 0.0);
    const Eigen::SelfAdjointEigenSolver<Mat> es(a);
    CHECK(es.eigenvalues().maxCoeff() < 0.0);
    // Known spectrum: -(n0+1)^2 (4 - 2cos(i pi h) - 2cos(j pi h)).
    const double h = 1.0 / 11.0;
    const double top = -121.0 * (4.0 - 4.0 * std::cos(M_PI * h));
    CHECK(es.eigenvalues().maxCoeff() == doctest::Approx(top).epsilon(1e-12));
    CHECK(s.nonZeros() == 5 * 100 - 4 * 10);
  }
  SUBCASE("random stable") {
    const SparseMat a = gen_random_stable(60, 11);
    const Mat d(a);
    const Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (d + d.transpose()));
    CHECK(es.eigenvalues().maxCoeff() <= -1.0);
    CHECK(lognorm2_upper_bound(a) <= -1.0);
    CHECK(lognorm2_upper_bound(a) >= es.eigenvalues().maxCoeff() - 1e-12);
    CHECK((Mat(gen_random_stable(60, 11)) - d).norm() == 0.0);
    CHECK((Mat(gen_random_stable(60, 12)) - d).norm() > 0.0);
    const Mat s(gen_random_stable_symmetric(40, 2));
    CHECK((s - s.transpose()).norm() == 0.0);
  }
  SUBCASE("Sylvester instance") {
    const GenSylvesterProblem prob = gen_sylvester_q2(30, 3, 7);
    CHECK(prob.terms() == 2);
    CHECK(prob.n() == 30);
    CHECK(prob.p() == 3);
    CHECK((Mat(prob.b[0]) - Mat::Identity(3, 3)).norm() == 0.0);
    CHECK((Mat(prob.a[1]) - Mat::Identity(30, 30)).norm() == 0.0);
    CHECK(prob.x0.norm() == 0.0);
    CHECK(prob.validate().empty());
  }
  CHECK_THROWS_AS(gen_laplacian2d(1), InvalidArgument);
  CHECK(norm1(gen_laplacian2d(3)) == doctest::Approx(16.0 * 8.0));
}

TEST_CASE("TimeGrid") {
  const TimeGrid g(0.5, 1.7, 7);
  CHECK(g.nodes() == 8);
  CHECK(g.node(0) == 0.5);
  CHECK(g.node(7) == 1.7);
  CHECK(g.node(3) == doctest::Approx(0.5 + 3 * 1.2 / 7));
  CHECK(g.all_nodes().size() == 8);
  CHECK_THROWS_AS(TimeGrid(1.0, 1.0, 3), InvalidArgument);
  CHECK_THROWS_AS(TimeGrid(0.0, 1.0, 0), InvalidArgument);
  CHECK_THROWS_AS(g.node(8), InvalidArgument);
}

TEST_CASE("problem bundles") {
  TempDir tmp;
  Rng rng(5);
  SUBCASE("DLE round trip") {
    DLEProblem p = gen_laplacian_dle(4, 2, 3, 0.25, 2.0);
    p.z0 = rng.normal_matrix(16, 1);
    write_bundle(tmp.path / "dle", p);
    const auto back = std::get<DLEProblem>(read_bundle(tmp.path / "dle"));
    CHECK((Mat(back.a) - Mat(p.a)).norm() == 0.0);
    CHECK((back.b - p.b).norm() == 0.0);
    CHECK((back.z0 - p.z0).norm() == 0.0);
    CHECK(back.t0 == 0.25);
    CHECK(back.tf == 2.0);
  }
  SUBCASE("Sylvester round trip") {
    const GenSylvesterProblem p = gen_sylvester_q2(12, 2, 4);
    write_bundle(tmp.path / "gs", p);
    const auto back = std::get<GenSylvesterProblem>(read_bundle(tmp.path / "gs"));
    REQUIRE(back.terms() == 2);
    for (Index i = 0; i < 2; ++i) {
      CHECK((Mat(back.a[i]) - Mat(p.a[i])).norm() == 0.0);
      CHECK((Mat(back.b[i]) - Mat(p.b[i])).norm() == 0.0);
    }
    CHECK((back.c - p.c).norm() == 0.0);
    CHECK((back.x0 - p.x0).norm() == 0.0);
  }
  SUBCASE("manifest errors") {
    CHECK_THROWS_AS(read_bundle(tmp.path / "absent"), IoError);
    fs::create_directories(tmp.path / "bad");
    std::ofstream(tmp.path / "bad" / kManifestName) << "{\"kind\": \"heat\"}";
    CHECK_THROWS_AS(read_bundle(tmp.path / "bad"), IoError);
    fs::create_directories(tmp.path / "broken");
    std::ofstream(tmp.path / "broken" / kManifestName) << "{not json";
    CHECK_THROWS_AS(read_bundle(tmp.path / "broken"), IoError);
  }
}
