#include <doctest.h>

#include <cmath>

#include "krymat/blockmat.hpp"
#include "krymat/errors.hpp"
#include "oracles.hpp"

using namespace krymat;
using krymat::testing::Mat;

namespace {

Mat elementwise_inner_matrix(const BlockRow& z, const BlockRow& w) {
  Mat out(z.blocks(), w.blocks());
  for (Index i = 0; i < z.blocks(); ++i) {
    for (Index j = 0; j < w.blocks(); ++j) {
      double s = 0.0;
      for (Index r = 0; r < z.rows(); ++r) {
        for (Index c = 0; c < z.block_width(); ++c) s += z.block(i)(r, c) * w.block(j)(r, c);
      }
      out(i, j) = s;
    }
  }
  return out;
}

Mat explicit_kron_apply(const BlockRow& v, const Mat& s) {
  const Index p = v.block_width();
  return v.data() * krymat::testing::kron(s, Mat::Identity(p, p));
}

}  // namespace

TEST_CASE("frob_inner") {
  const Mat i2 = Mat::Identity(2, 2);
  CHECK(frob_inner(i2, i2) == doctest::Approx(2.0));
  Mat a(2, 2);
  a << 1, 2, 3, 4;
  CHECK(frob_inner(a, i2) == doctest::Approx(5.0));

  Rng rng(11);
  const Mat y = rng.normal_matrix(5, 3);
  const Mat z = rng.normal_matrix(5, 3);
  double s = 0.0;
  for (Index i = 0; i < 5; ++i) {
    for (Index j = 0; j < 3; ++j) s += y(i, j) * z(i, j);
  }
  CHECK(std::abs(frob_inner(y, z) - s) <= 1e-14 * std::abs(s) + 1e-15);
  CHECK(frob_inner(y, z) == frob_inner(z, y));
  CHECK_THROWS_AS(frob_inner(y, Mat::Zero(3, 5)), DimensionError);
}

TEST_CASE("diamond") {
  Mat j(2, 2);
  j << 0, 1, 1, 0;
  Mat zdata(2, 4);
  zdata << Mat::Identity(2, 2), j;
  const BlockRow z(zdata, 2);
  const BlockRow w = BlockRow::single(Mat::Identity(2, 2));
  const Mat d = diamond(z, w);
  REQUIRE(d.rows() == 2);
  REQUIRE(d.cols() == 1);
  CHECK(d(0, 0) == doctest::Approx(2.0));
  CHECK(d(1, 0) == doctest::Approx(0.0));

  SUBCASE("matches elementwise sums") {
    Rng rng(3);
    const BlockRow a(rng.normal_matrix(6, 9), 3);
    const BlockRow b(rng.normal_matrix(6, 6), 3);
    CHECK((diamond(a, b) - elementwise_inner_matrix(a, b)).norm() <= 1e-13);
  }
  SUBCASE("F-orthonormal row gives identity") {
    Rng rng(5);
    const GlobalQr qr = global_qr(BlockRow(rng.normal_matrix(7, 8), 2));
    CHECK((diamond(qr.q, qr.q) - Mat::Identity(4, 4)).norm() <= 1e-13);
  }
  SUBCASE("right coefficient law") {
    Rng rng(6);
    const BlockRow a(rng.normal_matrix(4, 4), 2);
    const BlockRow b(rng.normal_matrix(4, 4), 2);
    const Mat l = rng.normal_matrix(2, 2);
    const Mat lhs = diamond(a, BlockRow(explicit_kron_apply(b, l), 2));
    CHECK((lhs - diamond(a, b) * l).norm() <= 1e-13 * (1.0 + lhs.norm()));
  }
  CHECK_THROWS_AS(diamond(BlockRow(Mat::Zero(4, 4), 2), BlockRow(Mat::Zero(4, 3), 3)), DimensionError);
  CHECK_THROWS_AS(diamond(BlockRow(Mat::Zero(4, 4), 2), BlockRow(Mat::Zero(5, 4), 2)), DimensionError);
}

TEST_CASE("kron_apply") {
  Rng rng(8);
  const BlockRow v(rng.normal_matrix(5, 6), 2);
  CHECK((kron_apply(v, Mat::Identity(3, 3)).data() - v.data()).norm() == 0.0);

  const Mat v1 = rng.normal_matrix(4, 3);
  const Mat s = Mat::Constant(1, 1, 2.0);
  CHECK((kron_apply(BlockRow::single(v1), s).data() - 2.0 * v1).norm() == 0.0);

  SUBCASE("agrees with the explicit Kronecker product") {
    const Mat sm = rng.normal_matrix(3, 4);
    const BlockRow out = kron_apply(v, sm);
    CHECK(out.blocks() == 4);
    CHECK(out.block_width() == 2);
    CHECK((out.data() - explicit_kron_apply(v, sm)).norm() <= 1e-13 * out.norm());
  }
  SUBCASE("norm preservation on an F-orthonormal row") {
    const GlobalQr qr = global_qr(BlockRow(rng.normal_matrix(9, 12), 3));
    const Mat z = rng.normal_matrix(4, 5);
    const double lhs = explicit_kron_apply(qr.q, z).norm();
    CHECK(std::abs(kron_apply(qr.q, z).norm() - z.norm()) <= 1e-12 * z.norm());
    CHECK(std::abs(lhs - z.norm()) <= 1e-12 * z.norm());
  }
  CHECK_THROWS_AS(kron_apply(v, Mat::Zero(2, 2)), DimensionError);
}

TEST_CASE("global_qr examples") {
  SUBCASE("scaled identity") {
    const GlobalQr qr = global_qr(BlockRow::single(3.0 * Mat::Identity(2, 2)));
    CHECK_FALSE(qr.rank_deficient());
    CHECK(qr.r(0, 0) == doctest::Approx(3.0 * std::sqrt(2.0)));
    CHECK((qr.q.data() - Mat::Identity(2, 2) / std::sqrt(2.0)).norm() <= 1e-15);
  }
  SUBCASE("duplicate block is flagged") {
    Mat z(2, 4);
    z << Mat::Identity(2, 2), Mat::Identity(2, 2);
    const GlobalQr qr = global_qr(BlockRow(z, 2));
    CHECK(qr.r(0, 0) == doctest::Approx(std::sqrt(2.0)));
    CHECK(qr.r(0, 1) == doctest::Approx(std::sqrt(2.0)));
    CHECK(qr.r(1, 1) == 0.0);
    REQUIRE(qr.rank_deficient());
    CHECK(qr.deficient.front() == 1);
    CHECK(qr.basis().blocks() == 1);
  }
  SUBCASE("random reconstruction and orthonormality") {
    Rng rng(21);
    const BlockRow z(rng.normal_matrix(6, 6), 2);
    const GlobalQr qr = global_qr(z);
    CHECK_FALSE(qr.rank_deficient());
    for (Index i = 0; i < 3; ++i) {
      for (Index j = 0; j < i; ++j) CHECK(qr.r(i, j) == 0.0);
    }
    CHECK((kron_apply(qr.q, qr.r).data() - z.data()).norm() <= 1e-12 * z.norm());
    CHECK((diamond(qr.q, qr.q) - Mat::Identity(3, 3)).norm() <= 1e-12);
  }
  SUBCASE("deterministic") {
    Rng rng(22);
    const BlockRow z(rng.normal_matrix(10, 12), 3);
    const GlobalQr a = global_qr(z);
    const GlobalQr b = global_qr(z);
    CHECK((a.q.data().array() == b.q.data().array()).all());
    CHECK((a.r.array() == b.r.array()).all());
  }
}

TEST_CASE("global_qr keeps orthogonality on nearly dependent blocks") {
  Rng rng(31);
  Mat z = rng.normal_matrix(20, 8);
  // Second and fourth blocks nearly repeat the first.
  z.middleCols(2, 2) = z.leftCols(2) + 1e-9 * rng.normal_matrix(20, 2);
  z.middleCols(6, 2) = z.leftCols(2) + 1e-7 * rng.normal_matrix(20, 2);
  const GlobalQr qr = global_qr(BlockRow(z, 2), 1e-12);
  CHECK_FALSE(qr.rank_deficient());
  CHECK((diamond(qr.q, qr.q) - Mat::Identity(4, 4)).norm() <= 1e-12);
}

TEST_CASE("BlockBasis::checked rejects non-orthonormal rows") {
  Rng rng(4);
  CHECK_THROWS_AS(BlockBasis::checked(BlockRow(rng.normal_matrix(5, 4), 2)), NumericError);
  const GlobalQr qr = global_qr(BlockRow(rng.normal_matrix(5, 4), 2));
  CHECK(BlockBasis::checked(qr.q).orthonormality_defect() <= 1e-12);
}

TEST_CASE("diamond laws on random data") {
  Rng rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = 3 + static_cast<Index>(rng.below(6));
    const Index s = 1 + static_cast<Index>(rng.below(3));
    const Index p = 1 + static_cast<Index>(rng.below(4));
    const BlockRow a(rng.normal_matrix(n, p * s), s);
    const BlockRow b(rng.normal_matrix(n, p * s), s);
    const BlockRow c(rng.normal_matrix(n, p * s), s);
    const Mat d = rng.normal_matrix(n, n);
    const Mat l = rng.normal_matrix(p, p);
    const double alpha = rng.normal();
    const double scale = 1.0 + a.norm() * (b.norm() + c.norm());
    const auto sum = [&](const BlockRow& x, const BlockRow& y) { return BlockRow(x.data() + y.data(), s); };

    CHECK((diamond(sum(a, b), c) - diamond(a, c) - diamond(b, c)).norm() <= 1e-12 * scale);
    CHECK((diamond(a, sum(b, c)) - diamond(a, b) - diamond(a, c)).norm() <= 1e-12 * scale);
    CHECK((diamond(BlockRow(alpha * a.data(), s), c) - alpha * diamond(a, c)).norm() <= 1e-12 * scale * (1 + std::abs(alpha)));
    CHECK((diamond(a, b).transpose() - diamond(b, a)).norm() <= 1e-12 * scale);
    CHECK((diamond(BlockRow(d * a.data(), s), b) - diamond(a, BlockRow(d.transpose() * b.data(), s))).norm() <=
          1e-12 * scale * d.norm());
    CHECK((diamond(a, kron_apply(b, l)) - diamond(a, b) * l).norm() <= 1e-12 * scale * (1 + l.norm()));
    CHECK(diamond(a, b).norm() <= a.norm() * b.norm() * (1 + 1e-12));
  }
}

TEST_CASE("norm bound for general coefficient matrices fails in general") {
  // ||V G||_F <= ||G||_F does not follow from F-orthonormality alone when p > 1:
  // V = [[e1, 0], [0, e1]] is F-orthonormal but V (e1 + e4) = 2 e1.
  Mat v = Mat::Zero(3, 4);
  v(0, 0) = 1.0;
  v(0, 3) = 1.0;
  const BlockRow row(v, 2);
  REQUIRE((diamond(row, row) - Mat::Identity(2, 2)).norm() == 0.0);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(4);
  g(0) = 1.0;
  g(3) = 1.0;
  CHECK((v * g).norm() == doctest::Approx(2.0));
  CHECK(g.norm() == doctest::Approx(std::sqrt(2.0)));
  CHECK((v * g).norm() > g.norm());
}
