#include "gfs/errors.hpp"
#include "gfs/numerics.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace gfs;

namespace {

Mat random_matrix(Index r, Index c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Mat m(r, c);
  for (Index j = 0; j < c; ++j)
    for (Index i = 0; i < r; ++i) m(i, j) = normal(rng);
  return m;
}

}  // namespace

TEST(Svd, IdentityHasUnitSingularValues) {
  const SvdResult f = svd(Mat::Identity(3, 3));
  EXPECT_TRUE(f.sigma.isApprox(Vec::Ones(3), 1e-14));
}

TEST(Svd, DiagonalSingularValuesAreSorted) {
  Mat a = Mat::Zero(3, 3);
  a.diagonal() << 1, 3, 2;
  const SvdResult f = svd(a);
  EXPECT_NEAR(f.sigma(0), 3.0, 1e-14);
  EXPECT_NEAR(f.sigma(1), 2.0, 1e-14);
  EXPECT_NEAR(f.sigma(2), 1.0, 1e-14);
}

TEST(Svd, RandomReconstructsAndIsOrthonormal) {
  const Mat a = random_matrix(5, 3, 1);
  const SvdResult f = svd(a);
  EXPECT_LE((f.u * f.sigma.asDiagonal() * f.vt - a).norm(), 1e-8 * a.norm());
  EXPECT_LE((f.u.transpose() * f.u - Mat::Identity(3, 3)).norm(), 1e-10);
  EXPECT_LE((f.vt * f.vt.transpose() - Mat::Identity(3, 3)).norm(), 1e-10);
}

TEST(Svd, SingularValuesInvariantUnderRotation) {
  std::mt19937_64 rng(2);
  const Mat a = random_matrix(6, 4, 3);
  const Mat q = oracle::random_basis(6, 6, rng);
  EXPECT_LE((svd(q * a).sigma - svd(a).sigma).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Svd, RejectsNonFiniteAndEmpty) {
  Mat a = Mat::Ones(2, 2);
  a(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(svd(a), DomainError);
  EXPECT_THROW(svd(Mat(0, 0)), DomainError);
}

TEST(Rank, RelativeThreshold) {
  Vec s(3);
  s << 1.0, 1e-11, 1e-13;
  EXPECT_EQ(numerical_rank(s), 2);
  s << 1.0, 1e-12, 0.0;
  EXPECT_EQ(numerical_rank(s), 1);  // exactly at the threshold counts as zero
}

TEST(Pseudoinverse, IdentityAndZeroLeftInPlace) {
  EXPECT_TRUE(pseudoinverse(Mat::Identity(3, 3)).isApprox(Mat::Identity(3, 3)));
  Mat a = Mat::Zero(2, 2);
  a(0, 0) = 2.0;
  const Mat p = pseudoinverse(a);
  EXPECT_DOUBLE_EQ(p(0, 0), 0.5);
  EXPECT_EQ(p(1, 1), 0.0);
  EXPECT_EQ(p(0, 1), 0.0);
}

TEST(Pseudoinverse, FullRankTallGivesLeftInverse) {
  const Mat a = random_matrix(4, 2, 4);
  EXPECT_LE((pseudoinverse(a) * a - Mat::Identity(2, 2)).norm(), 1e-8);
}

TEST(Pseudoinverse, InvolutionOnSquareFullRank) {
  const Mat a = random_matrix(5, 5, 5);
  EXPECT_LE((pseudoinverse(pseudoinverse(a)) - a).norm(), 1e-8);
}

TEST(Projector, Examples) {
  Mat e1 = Mat::Zero(3, 1);
  e1(0, 0) = 1.0;
  Mat expected = Mat::Zero(3, 3);
  expected(0, 0) = 1.0;
  EXPECT_LE((projector(e1) - expected).norm(), 1e-14);
  EXPECT_LE((projector(random_matrix(4, 4, 6)) - Mat::Identity(4, 4)).norm(), 1e-8);

  const Mat a = random_matrix(4, 2, 7);
  const Vec v = a * Vec::Ones(2);
  EXPECT_LE((projector(a) * v - v).norm(), 1e-8);
}

TEST(Projector, FixesItsArgumentForAnyShape) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Mat a = random_matrix(6, 1 + static_cast<Index>(seed % 7), 100 + seed);
    if (seed % 3 == 0) a.col(0) = a.col(a.cols() - 1);  // rank deficient
    EXPECT_LE((projector(a) * a - a).norm(), 1e-8 * std::max(1.0, a.norm()));
  }
}

TEST(Lstsq, IdentityAndExactRange) {
  const Vec y = random_matrix(3, 1, 8).col(0);
  EXPECT_LE((lstsq(Mat::Identity(3, 3), y) - y).norm(), 1e-14);
  const Mat a = random_matrix(6, 3, 9);
  const Vec in_range = a * Vec::LinSpaced(3, 1.0, 3.0);
  EXPECT_LE((a * lstsq(a, in_range) - in_range).norm(), 1e-10);
}

TEST(Lstsq, MatchesNormalEquations) {
  const Mat a = random_matrix(10, 4, 10);
  const Vec y = random_matrix(10, 1, 11).col(0);
  const Vec oracle = (a.transpose() * a).ldlt().solve(a.transpose() * y);
  EXPECT_LE((lstsq(a, y) - oracle).norm(), 1e-8);
  EXPECT_THROW(lstsq(a, Vec::Ones(3)), DomainError);
}

TEST(SymmetricEigen, KnownSpectra) {
  Mat d = Mat::Zero(3, 3);
  d.diagonal() << 3, 1, 2;
  const EigenResult e = symmetric_eigen(d);
  EXPECT_NEAR(e.values(0), 1.0, 1e-14);
  EXPECT_NEAR(e.values(1), 2.0, 1e-14);
  EXPECT_NEAR(e.values(2), 3.0, 1e-14);

  Mat swap(2, 2);
  swap << 0, 1, 1, 0;
  const EigenResult s = symmetric_eigen(swap);
  EXPECT_NEAR(s.values(0), -1.0, 1e-14);
  EXPECT_NEAR(s.values(1), 1.0, 1e-14);
}

TEST(SymmetricEigen, RandomResiduals) {
  const Mat g = random_matrix(6, 6, 12);
  const Mat a = g + g.transpose();
  const EigenResult e = symmetric_eigen(a);
  for (Index i = 0; i < 6; ++i) {
    EXPECT_LE((a * e.vectors.col(i) - e.values(i) * e.vectors.col(i)).norm(), 1e-8);
    if (i > 0) EXPECT_LE(e.values(i - 1), e.values(i));
  }
}

TEST(SymmetricEigen, RejectsAsymmetricInput) {
  Mat a = Mat::Identity(2, 2);
  a(0, 1) = 1.0;
  EXPECT_THROW(symmetric_eigen(a), DomainError);
}

TEST(Validation, UnitColumns) {
  Mat a = Mat::Identity(3, 2);
  EXPECT_NO_THROW(require_unit_columns(a, "test"));
  a(0, 0) = 1.1;
  EXPECT_THROW(require_unit_columns(a, "test"), DomainError);
}
