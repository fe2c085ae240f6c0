#include <doctest.h>

#include <cmath>

#include "krymat/errors.hpp"
#include "krymat/limits.hpp"
#include "krymat/smallmat.hpp"
#include "oracles.hpp"

using namespace krymat;
using krymat::testing::Mat;
using krymat::testing::Vec;

namespace {

double rel(const Mat& a, const Mat& b) { return (a - b).norm() / std::max(1.0, b.norm()); }

}  // namespace

TEST_CASE("expm") {
  CHECK((expm(Mat::Zero(3, 3)) - Mat::Identity(3, 3)).norm() == 0.0);

  Mat n(2, 2);
  n << 0, 1, 0, 0;
  Mat expected(2, 2);
  expected << 1, 1, 0, 1;
  CHECK((expm(n) - expected).norm() <= 1e-15);

  Rng rng(1);
  const Mat g = rng.normal_matrix(5, 5);
  const Mat sym = 0.5 * (g + g.transpose());
  CHECK(rel(expm(sym), testing::sym_expm(sym)) <= 1e-11);

  SUBCASE("nonsymmetric against Taylor") {
    const Mat m = rng.normal_matrix(6, 6);
    CHECK(rel(expm(m), testing::taylor_expm(m)) <= 1e-11);
  }
  SUBCASE("inverse property") {
    for (int trial = 0; trial < 10; ++trial) {
      Mat m = rng.normal_matrix(6, 6);
      m *= rng.uniform(0.1, 10.0) / m.norm();
      CHECK(rel(expm(m) * expm(-m), Mat::Identity(6, 6)) <= 1e-11);
    }
  }
  SUBCASE("large norm symmetric") {
    const Mat big = -2000.0 * sym.transpose() * sym;
    const Mat ref = testing::sym_expm(big);
    CHECK((expm(big) - ref).norm() <= 1e-11 * std::max(1.0, ref.norm()));
  }
  CHECK_THROWS_AS(expm(Mat::Zero(2, 3)), DimensionError);
  CHECK_THROWS_AS(expm(Mat::Constant(1, 1, 1e6)), NumericError);
}

TEST_CASE("phi1") {
  CHECK((phi1(Mat::Zero(4, 4)) - Mat::Identity(4, 4)).norm() <= 1e-15);
  CHECK(phi1(Mat::Constant(1, 1, 1.0))(0, 0) == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));

  Rng rng(2);
  const Mat m = rng.normal_matrix(5, 5);
  const Mat direct = m.partialPivLu().solve(testing::taylor_expm(m) - Mat::Identity(5, 5));
  CHECK(rel(phi1(m), direct) <= 1e-10);

  SUBCASE("identity holds for singular arguments") {
    Mat s = rng.normal_matrix(5, 5);
    s.col(4) = s.col(0) + s.col(1);
    CHECK(rel(s * phi1(s), expm(s) - Mat::Identity(5, 5)) <= 1e-12);
    Mat nil = Mat::Zero(3, 3);
    nil(0, 1) = 1.0;
    nil(1, 2) = 1.0;
    Mat ref = Mat::Identity(3, 3) + nil / 2.0;
    ref(0, 2) = 1.0 / 6.0;
    CHECK((phi1(nil) - ref).norm() <= 1e-15);
  }
  SUBCASE("action matches the full function") {
    const Vec v = rng.normal_matrix(5, 1);
    const auto [e, pv] = expm_and_phi1_action(m, v);
    CHECK(rel(e, expm(m)) <= 1e-13);
    CHECK(rel(pv, phi1(m) * v) <= 1e-13);
    CHECK_THROWS_AS(expm_and_phi1_action(m, Vec::Zero(4)), DimensionError);
  }
  CHECK_THROWS_AS(phi1(Mat::Zero(3, 2)), DimensionError);
}

TEST_CASE("lyap_solve") {
  {
    const SymmetricMat y = lyap_solve(Mat::Constant(1, 1, -1.0), SymmetricMat(Mat::Constant(1, 1, 2.0)));
    CHECK(y(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  }
  {
    Mat t = Mat::Zero(2, 2);
    t(0, 0) = -1.0;
    t(1, 1) = -2.0;
    Mat q(2, 2);
    q << 2, 3, 3, 4;
    const SymmetricMat y = lyap_solve(t, SymmetricMat(q));
    CHECK((y.matrix() - Mat::Ones(2, 2)).norm() <= 1e-14);
  }

  Rng rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const Mat t = testing::random_stable_dense(rng, 6, 0.5);
    const Mat g = rng.normal_matrix(6, 6);
    const Mat q = g + g.transpose();
    const SymmetricMat y = lyap_solve(t, SymmetricMat(q));
    const Mat ref = testing::kron_lyap(t, q);
    CHECK(rel(y.matrix(), ref) <= 1e-10);
    CHECK((t * y.matrix() + y.matrix() * t.transpose() + q).norm() <=
          1e-10 * (t.norm() * y.matrix().norm() + q.norm()));
    CHECK((y.matrix() - y.matrix().transpose()).norm() == 0.0);
  }

  SUBCASE("complex eigenvalues use 2x2 Schur blocks") {
    Mat t(4, 4);
    t << -1, 5, 0, 0,  //
        -5, -1, 0, 0,  //
        0.3, 0.2, -0.5, 2,  //
        0.1, 0, -3, -0.5;
    const Mat q = Mat::Identity(4, 4);
    CHECK(rel(lyap_solve(t, SymmetricMat(q)).matrix(), testing::kron_lyap(t, q)) <= 1e-11);
  }
  SUBCASE("quasi-triangular solver handles repeated right-hand sides") {
    const Mat t = testing::random_stable_dense(rng, 7, 1.0);
    const Eigen::RealSchur<Mat> schur(t);
    const QuasiTriangularLyapunov core(schur.matrixT());
    for (int k = 0; k < 3; ++k) {
      const Mat g = rng.normal_matrix(7, 7);
      const Mat c = g + g.transpose();
      const Mat y = core.solve(c);
      const Mat s = schur.matrixT();
      CHECK((s * y + y * s.transpose() + c).norm() <= 1e-10 * (s.norm() * y.norm() + c.norm()));
    }
  }
  SUBCASE("singular operator is ill-posed") {
    Mat t = Mat::Zero(2, 2);
    t(0, 0) = 1.0;
    t(1, 1) = -1.0;
    CHECK_THROWS_AS(lyap_solve(t, SymmetricMat(Mat::Identity(2, 2))), IllPosedError);
    CHECK_THROWS_AS(lyap_solve(Mat::Zero(1, 1), SymmetricMat(Mat::Identity(1, 1))), IllPosedError);
  }
  CHECK_THROWS_AS(lyap_solve(Mat::Identity(2, 2) * -1.0, SymmetricMat(Mat::Identity(3, 3))), DimensionError);
}

TEST_CASE("vanloan_gram") {
  {
    const SymmetricMat g = vanloan_gram(Mat::Constant(1, 1, -1.0), Vec(Vec::Ones(1)), 1.0);
    CHECK(g(0, 0) == doctest::Approx((1.0 - std::exp(-2.0)) / 2.0).epsilon(1e-13));
    CHECK(g(0, 0) == doctest::Approx(0.432332).epsilon(1e-6));
  }
  {
    const SymmetricMat g = vanloan_gram(Mat::Zero(1, 1), Vec(Vec::Ones(1)), 2.0);
    CHECK(g(0, 0) == doctest::Approx(2.0).epsilon(1e-14));
  }
  CHECK(vanloan_gram(Mat::Identity(3, 3), Vec(Vec::Ones(3)), 0.0).matrix().norm() == 0.0);

  Rng rng(4);
  const Mat h = testing::random_stable_dense(rng, 4, 0.5);
  const Vec q = rng.normal_matrix(4, 1);
  const Mat qq = q * q.transpose();
  const auto integrand = [&](double s) {
    const Mat e = testing::taylor_expm(s * h);
    return Mat(e * qq * e.transpose());
  };

  SUBCASE("Simpson quadrature") {
    const Mat ref = testing::simpson(integrand, 0.0, 0.7, 10000);
    CHECK((vanloan_gram(h, q, 0.7).matrix() - ref).norm() <= 1e-9);
    CHECK((gram_simpson(h, qq, 0.7, 10000).matrix() - ref).norm() <= 1e-9);
  }
  SUBCASE("monotone in t") {
    const Mat hn = rng.normal_matrix(4, 4);
    double prev_t = 0.0;
    Mat prev = Mat::Zero(4, 4);
    for (double t : {0.1, 0.3, 0.8, 1.5, 3.0}) {
      const Mat g = vanloan_gram(hn, q, t).matrix();
      const Eigen::SelfAdjointEigenSolver<Mat> es(g - prev);
      CHECK(es.eigenvalues().minCoeff() >= -1e-12 * std::max(1.0, g.norm()));
      CHECK(t > prev_t);
      prev = g;
      prev_t = t;
    }
  }
  SUBCASE("derivative is the Lyapunov right-hand side") {
    const double t = 0.6;
    const double d = 1e-5;
    const Mat g = vanloan_gram(h, q, t).matrix();
    const Mat fd = (vanloan_gram(h, q, t + d).matrix() - vanloan_gram(h, q, t - d).matrix()) / (2 * d);
    CHECK((fd - (h * g + g * h.transpose() + qq)).norm() <= 1e-6);
  }
  SUBCASE("stiff argument over a long interval") {
    // Steady state of a stiff stable H is the Lyapunov solution.
    Mat hs = -Mat::Identity(3, 3) * 500.0;
    hs(0, 1) = 20.0;
    hs(2, 2) = -2.0;
    const Vec qs = Vec(Vec::Ones(3));
    const Mat g = vanloan_gram(hs, qs, 40.0).matrix();
    const Mat ref = testing::kron_lyap(hs, qs * qs.transpose());
    CHECK(g.allFinite());
    CHECK((g - ref).norm() <= 1e-10 * ref.norm());
  }
  CHECK_THROWS_AS(vanloan_gram(h, q, -1.0), InvalidArgument);
  CHECK_THROWS_AS(vanloan_gram(h, Vec(Vec::Ones(3)), 1.0), DimensionError);
}

TEST_CASE("lognorm2") {
  Mat d = Mat::Zero(2, 2);
  d(0, 0) = -1.0;
  d(1, 1) = -3.0;
  CHECK(lognorm2(d) == doctest::Approx(-1.0).epsilon(1e-15));
  Mat n(2, 2);
  n << 0, 2, 0, 0;
  CHECK(lognorm2(n) == doctest::Approx(1.0).epsilon(1e-15));

  Rng rng(5);
  const Mat a = rng.normal_matrix(8, 8);
  // Cyclic Jacobi on the symmetric part in extended precision.
  long double m[8][8];
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) m[i][j] = 0.5L * ((long double)a(i, j) + (long double)a(j, i));
  }
  for (int sweep = 0; sweep < 60; ++sweep) {
    for (int p = 0; p < 8; ++p) {
      for (int q = p + 1; q < 8; ++q) {
        if (m[p][q] == 0.0L) continue;
        const long double theta = (m[q][q] - m[p][p]) / (2.0L * m[p][q]);
        const long double t = (theta >= 0 ? 1.0L : -1.0L) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0L));
        const long double c = 1.0L / std::sqrt(t * t + 1.0L);
        const long double s = t * c;
        for (int k = 0; k < 8; ++k) {
          const long double mkp = m[k][p], mkq = m[k][q];
          m[k][p] = c * mkp - s * mkq;
          m[k][q] = s * mkp + c * mkq;
        }
        for (int k = 0; k < 8; ++k) {
          const long double mpk = m[p][k], mqk = m[q][k];
          m[p][k] = c * mpk - s * mqk;
          m[q][k] = s * mpk + c * mqk;
        }
      }
    }
  }
  long double top = m[0][0];
  for (int i = 1; i < 8; ++i) top = std::max(top, m[i][i]);
  CHECK(std::abs(lognorm2(a) - static_cast<double>(top)) <= 1e-13 * a.norm());
}

TEST_CASE("trunc_sym_factor") {
  {
    const LowRankFactor f = trunc_sym_factor(SymmetricMat(Mat::Identity(2, 2)), 0.0);
    CHECK(f.rank() == 2);
    CHECK((f.z * f.z.transpose() - Mat::Identity(2, 2)).norm() <= 1e-15);
  }
  {
    Mat d = Mat::Zero(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = 1e-20;
    CHECK(trunc_sym_factor(SymmetricMat(d), 1e-12).rank() == 1);
  }
  Rng rng(6);
  const Mat g = rng.normal_matrix(6, 3);
  const Mat psd = g * g.transpose();
  const double tol = 1e-10;
  const LowRankFactor f = trunc_sym_factor(SymmetricMat::symmetric_part(psd), tol);
  CHECK(f.rank() == 3);
  const double lmax = Eigen::SelfAdjointEigenSolver<Mat>(psd).eigenvalues().cwiseAbs().maxCoeff();
  CHECK((f.reconstruct() - psd).operatorNorm() <= tol * lmax + 1e-13 * lmax);
  for (Index j = 1; j < f.rank(); ++j) CHECK(f.z.col(j).norm() <= f.z.col(j - 1).norm() * (1 + 1e-14));

  SUBCASE("indefinite input keeps signs") {
    Mat d = Mat::Zero(3, 3);
    d(0, 0) = 2.0;
    d(1, 1) = -5.0;
    d(2, 2) = 1e-16;
    const LowRankFactor fi = trunc_sym_factor(SymmetricMat(d), 1e-12);
    CHECK(fi.rank() == 2);
    CHECK(fi.signature(0) == -1.0);
    CHECK(fi.signature(1) == 1.0);
    CHECK((fi.reconstruct() - d).norm() <= 1e-14);
  }
}

TEST_CASE("SymmetricMat construction") {
  Mat a(2, 2);
  a << 1, 2, 2.5, 1;
  CHECK_THROWS_AS(SymmetricMat{a}, InvalidArgument);
  const SymmetricMat s = SymmetricMat::symmetric_part(a);
  CHECK(s(0, 1) == s(1, 0));
  CHECK(s(0, 1) == doctest::Approx(2.25));
}

TEST_CASE("dense cap") {
  const Index saved = dense_cap();
  set_dense_cap(5);
  CHECK_THROWS_AS(require_within_cap(6, "test"), CapExceededError);
  CHECK_NOTHROW(require_within_cap(5, "test"));
  set_dense_cap(saved);
  CHECK_THROWS_AS(set_dense_cap(0), InvalidArgument);
}
