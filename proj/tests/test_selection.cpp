#include "gfs/errors.hpp"
#include "gfs/experiments.hpp"
#include "gfs/geometry.hpp"
#include "gfs/selection.hpp"
#include "gfs/synth.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace gfs;

TEST(Omp, ExactAtomStopsAfterOneStep) {
  const Mat atoms = Mat::Identity(5, 5);
  const FeatureSet fs = omp(atoms.col(3), atoms, StoppingRule::sparsity(2));
  ASSERT_EQ(fs.selected, std::vector<Index>{3});
  EXPECT_EQ(fs.residual_norm, 0.0);
  EXPECT_DOUBLE_EQ(fs.coeffs[0], 1.0);
}

TEST(Omp, OrthogonalCaseSelectsByMagnitude) {
  std::mt19937_64 rng(1);
  const Mat atoms = oracle::random_basis(6, 4, rng);
  const Vec y = 0.8 * atoms.col(1) + 0.6 * atoms.col(2);
  const FeatureSet fs = omp(y, atoms, StoppingRule::sparsity(2));
  ASSERT_EQ(fs.selected, (std::vector<Index>{1, 2}));
  EXPECT_NEAR(fs.coeffs[0], 0.8, 1e-12);
  EXPECT_NEAR(fs.coeffs[1], 0.6, 1e-12);
}

TEST(Omp, MatchesNaiveReference) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 50; ++t) {
    const Mat atoms = oracle::random_unit_columns(20, 40, rng);
    const Vec y = oracle::random_unit_columns(20, 1, rng).col(0);
    EXPECT_EQ(omp(y, atoms, StoppingRule::sparsity(5)).selected, oracle::naive_omp(y, atoms, 5));
  }
}

TEST(Omp, ResidualRuleStopsAtTolerance) {
  std::mt19937_64 rng(3);
  const Mat atoms = oracle::random_basis(8, 8, rng);
  Vec a = Vec::Zero(8);
  a << 0.9, 0.3, 0.2, 0.1, 0.05, 0, 0, 0;
  const Vec y = atoms * a;
  const FeatureSet fs = omp(y, atoms, StoppingRule::residual(0.15));
  EXPECT_EQ(fs.selected.size(), 3u);
  EXPECT_LE(fs.residual_norm, 0.15);
}

TEST(Omp, ResidualOrthogonalAndNonincreasing) {
  std::mt19937_64 rng(4);
  const Mat atoms = oracle::random_unit_columns(15, 30, rng);
  const Vec y = oracle::random_unit_columns(15, 1, rng).col(0);
  double prev = y.norm();
  const OmpObserver check = [&](const OmpStep& step) {
    for (const Index j : step.selected) EXPECT_LE(std::abs(atoms.col(j).dot(*step.residual)), 1e-8);
    EXPECT_LE(step.residual->norm(), prev + 1e-15);
    prev = step.residual->norm();
    return true;
  };
  omp(y, atoms, StoppingRule::sparsity(10), -1, check);
  const EndogenousOmp engine(atoms);
  prev = 1.0;
  const OmpObserver check_endo = [&](const OmpStep& step) {
    for (const Index j : step.selected) EXPECT_LE(std::abs(atoms.col(j).dot(*step.residual)), 1e-8);
    EXPECT_LE(step.residual->norm(), prev + 1e-15);
    prev = step.residual->norm();
    return true;
  };
  engine.select(0, StoppingRule::sparsity(10), check_endo);
}

TEST(Omp, OrthonormalAtomsGiveTopCorrelations) {
  std::mt19937_64 rng(5);
  const Mat atoms = oracle::random_basis(10, 10, rng);
  const Vec y = oracle::random_unit_columns(10, 1, rng).col(0);
  const Vec corr = (atoms.transpose() * y).cwiseAbs();
  std::vector<Index> order(10);
  for (Index i = 0; i < 10; ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return corr(a) > corr(b); });
  order.resize(4);
  EXPECT_EQ(omp(y, atoms, StoppingRule::sparsity(4)).selected, order);
}

TEST(Omp, StallsWithoutCorrelatedAtoms) {
  Mat atoms = Mat::Zero(3, 2);
  atoms(1, 0) = atoms(2, 1) = 1.0;
  Vec y = Vec::Zero(3);
  y(0) = 1.0;
  try {
    omp(y, atoms, StoppingRule::sparsity(2));
    FAIL() << "expected a stall";
  } catch (const StallError& e) {
    EXPECT_TRUE(e.partial().selected.empty());
  }
}

TEST(Omp, TiesGoToLowestIndex) {
  Mat atoms = Mat::Identity(2, 2);
  Vec y(2);
  y << 1.0, 1.0;
  EXPECT_EQ(omp(y, atoms, StoppingRule::sparsity(1)).selected, std::vector<Index>{0});
}

TEST(Omp, Errors) {
  EXPECT_THROW(StoppingRule::sparsity(0), DomainError);
  EXPECT_THROW(StoppingRule::residual(0.0), DomainError);
  EXPECT_THROW(omp(Vec::Ones(2), Mat::Identity(3, 3), StoppingRule::sparsity(1)), DomainError);
  EXPECT_THROW(omp(Vec::Ones(3), Mat::Identity(3, 3), StoppingRule::sparsity(1), 5), DomainError);
}

TEST(EndogenousOmp, MatchesDirectOmpAndNaive) {
  std::mt19937_64 rng(6);
  const Mat pts = oracle::random_unit_columns(12, 40, rng);
  const EndogenousOmp engine(pts);
  for (Index i = 0; i < pts.cols(); ++i) {
    const FeatureSet a = engine.select(i, StoppingRule::sparsity(6));
    const FeatureSet b = omp(pts.col(i), pts, StoppingRule::sparsity(6), i);
    ASSERT_EQ(a.selected, b.selected);
    ASSERT_EQ(a.selected, oracle::naive_omp(pts.col(i), pts, 6, i));
    for (std::size_t t = 0; t < a.coeffs.size(); ++t) EXPECT_NEAR(a.coeffs[t], b.coeffs[t], 1e-10);
    EXPECT_NEAR(a.residual_norm, b.residual_norm, 1e-10);
    EXPECT_TRUE(std::find(a.selected.begin(), a.selected.end(), i) == a.selected.end());
  }
}

TEST(OmpFeatureSets, CollinearClustersStayInside) {
  Mat pts = Mat::Zero(2, 6);
  pts.block(0, 0, 1, 3) << 1, -1, 1;
  pts.block(1, 3, 1, 3) << 1, 1, -1;
  const std::vector<int> labels{0, 0, 0, 1, 1, 1};
  const auto sets = omp_feature_sets(pts, StoppingRule::sparsity(1));
  ASSERT_EQ(sets.size(), 6u);
  for (const auto& fs : sets) EXPECT_TRUE(efs_check(fs, labels));
}

TEST(OmpFeatureSets, EqualIndependentCalls) {
  UnionSpec spec;
  spec.k = 5;
  spec.q = 2;
  spec.d = 20;
  spec.seed = 7;
  const Ensemble e = generate_union(spec);
  const auto sets = omp_feature_sets(e.points, StoppingRule::sparsity(5));
  ASSERT_EQ(static_cast<Index>(sets.size()), e.size());
  for (Index i = 0; i < e.size(); ++i) {
    EXPECT_EQ(sets[static_cast<std::size_t>(i)].selected,
              omp(e.points.col(i), e.points, StoppingRule::sparsity(5), i).selected);
  }
}

TEST(Nn, DuplicateIsFirstNeighbor) {
  std::mt19937_64 rng(8);
  Mat pts = oracle::random_unit_columns(5, 8, rng);
  pts.col(6) = -pts.col(2);
  const auto sets = nn_feature_sets(pts, 3);
  EXPECT_EQ(sets[2].selected.front(), 6);
  EXPECT_NEAR(std::abs(sets[2].coeffs.front()), 1.0, 1e-12);
}

TEST(Nn, OrthogonalTiesByIndex) {
  const auto sets = nn_feature_sets(Mat::Identity(5, 5), 2);
  EXPECT_EQ(sets[0].selected, (std::vector<Index>{1, 2}));
  EXPECT_EQ(sets[3].selected, (std::vector<Index>{0, 1}));
}

TEST(Nn, MatchesFullSort) {
  std::mt19937_64 rng(9);
  const Mat pts = oracle::random_unit_columns(6, 30, rng);
  const auto sets = nn_feature_sets(pts, 7);
  for (Index i = 0; i < pts.cols(); ++i) {
    EXPECT_EQ(sets[static_cast<std::size_t>(i)].selected, oracle::brute_nn(pts, i, 7));
  }
  EXPECT_THROW(nn_feature_sets(pts, 30), DomainError);
}

TEST(EfsCheck, Examples) {
  const std::vector<int> labels{0, 0, 1, 1};
  FeatureSet fs;
  fs.point_index = 0;
  fs.selected = {1};
  EXPECT_TRUE(efs_check(fs, labels));
  fs.selected = {1, 2};
  EXPECT_FALSE(efs_check(fs, labels));
  fs.selected = {};
  EXPECT_THROW(efs_check(fs, labels), DomainError);
}

TEST(EfsCheck, BatchEqualsExperimentFraction) {
  UnionSpec spec;
  spec.k = 6;
  spec.q = 4;
  spec.d = 12;
  spec.seed = 10;
  const Ensemble e = generate_union(spec);
  std::vector<FeatureSet> sets;
  const EndogenousOmp engine(e.points);
  for (Index i = 0; i < e.size(); ++i) {
    try {
      sets.push_back(engine.select(i, StoppingRule::sparsity(6)));
    } catch (const StallError& s) {
      sets.push_back(s.partial());
    }
  }
  EXPECT_DOUBLE_EQ(efs_rate(sets, e.labels), efs_fraction(e, Method::omp, 6));
  EXPECT_DOUBLE_EQ(efs_rate(nn_feature_sets(e.points, 6), e.labels), efs_fraction(e, Method::nn, 6));
}

// On instances certified by the coherence condition, every OMP step picks a
// point from the correct cluster and the normalized residual stays in the
// cluster's subspace.
TEST(GreedySelection, CertifiedInstancesSelectCorrectlyAtEveryStep) {
  std::mt19937_64 rng(11);
  int certified = 0;
  for (int t = 0; t < 200; ++t) {
    std::uniform_int_distribution<int> lines(6, 24);
    std::uniform_real_distribution<double> cosd(0.0, 0.7);
    const auto inst = oracle::lines_instance(7, lines(rng), 2, cosd(rng), 20, rng);
    const double mu = mutual_coherence(inst.y_cert, inst.y_other);
    const SubspaceBasis bc(inst.phi_cert), bo(inst.phi_other);
    if (!efs_condition_thm1(mu, inst.eps, principal_angles(bc, bo).max()).holds) continue;
    ++certified;
    Mat pts(7, inst.y_cert.cols() + inst.y_other.cols());
    pts << inst.y_cert, inst.y_other;
    const Index m = inst.y_cert.cols();
    const EndogenousOmp engine(pts);
    for (Index i = 0; i < m; ++i) {
      const OmpObserver check = [&](const OmpStep& step) {
        EXPECT_LT(step.chosen, m);
        if (step.residual->norm() > 1e-12) {
          EXPECT_LE(bc.max_distance(step.residual->normalized()), 1e-8);
        }
        return true;
      };
      engine.select(i, StoppingRule::sparsity(2), check);
    }
  }
  EXPECT_GT(certified, 20);
}
