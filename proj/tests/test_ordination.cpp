#include "bspcoa/ordination.hpp"
#include "bspcoa/random.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace bspcoa;

namespace {

FeatureMatrix table(std::initializer_list<std::initializer_list<double>> rows) {
  MatrixXd m(static_cast<Index>(rows.size()), static_cast<Index>(rows.begin()->size()));
  Index i = 0;
  for (const auto &r : rows) {
    Index j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return FeatureMatrix::from(m);
}

MatrixXd random_matrix(Index n, Index p, std::uint64_t seed) {
  Rng rng(seed);
  return rng.normal_matrix(n, p);
}

// Eigenvalues of a symmetric matrix, descending, by a separate solver.
VectorXd reference_eigenvalues(const MatrixXd &g) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(g, Eigen::EigenvaluesOnly);
  return es.eigenvalues().reverse();
}

} // namespace

TEST(Distance, EuclideanSmallCases) {
  const auto d = euclidean_distance(table({{0, 0}, {3, 4}, {0, 0}}));
  EXPECT_DOUBLE_EQ(d.values()(0, 1), 5.0);
  EXPECT_DOUBLE_EQ(d.values()(0, 2), 0.0);
  EXPECT_DOUBLE_EQ(d.values()(1, 1), 0.0);
}

TEST(Distance, EuclideanMatchesBruteForce) {
  const MatrixXd x = random_matrix(5, 3, 1);
  const auto d = euclidean_distance(FeatureMatrix::from(x));
  for (Index i = 0; i < 5; ++i)
    for (Index j = 0; j < 5; ++j) {
      double s = 0.0;
      for (Index c = 0; c < 3; ++c) s += (x(i, c) - x(j, c)) * (x(i, c) - x(j, c));
      EXPECT_NEAR(d.values()(i, j), std::sqrt(s), 1e-12);
    }
}

TEST(Distance, BrayCurtisHandValues) {
  const auto d = bray_curtis_distance(table({{2, 1, 0}, {1, 1, 1}, {2, 1, 0}, {0, 0, 5}}));
  EXPECT_NEAR(d.values()(0, 1), 1.0 / 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(d.values()(0, 2), 0.0);
  EXPECT_DOUBLE_EQ(bray_curtis_distance(table({{1, 0}, {0, 1}})).values()(0, 1), 1.0);
  EXPECT_GE(d.values().minCoeff(), 0.0);
  EXPECT_LE(d.values().maxCoeff(), 1.0);
}

TEST(Distance, BrayCurtisDegeneratePairNamesSamples) {
  auto t = table({{0, 0}, {0, 0}, {1, 2}});
  t.row_ids = {"alpha", "beta", "gamma"};
  try {
    bray_curtis_distance(t);
    FAIL() << "expected DataError";
  } catch (const DataError &e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("alpha"), std::string::npos);
    EXPECT_NE(msg.find("beta"), std::string::npos);
  }
}

TEST(Distance, HellingerEqualsEuclideanOnRootCompositions) {
  Rng rng(3);
  MatrixXd counts(4, 6);
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 6; ++j) counts(i, j) = static_cast<double>(rng.poisson(20.0));
  const auto h = hellinger_distance(FeatureMatrix::from(counts));
  MatrixXd roots = counts;
  for (Index i = 0; i < 4; ++i) roots.row(i) = (counts.row(i) / counts.row(i).sum()).cwiseSqrt();
  const auto e = euclidean_distance(FeatureMatrix::from(roots));
  EXPECT_LE((h.values() - e.values()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(hellinger_distance(table({{1, 0}, {0, 1}})).values()(0, 1), std::sqrt(2.0), 1e-15);
  EXPECT_DOUBLE_EQ(hellinger_distance(table({{1, 3}, {2, 6}})).values()(0, 1), 0.0);
}

TEST(Distance, HellingerZeroRowNamesSample) {
  auto t = table({{0, 0}, {1, 2}});
  t.row_ids = {"empty_sample", "ok"};
  try {
    hellinger_distance(t);
    FAIL() << "expected DataError";
  } catch (const DataError &e) {
    EXPECT_NE(std::string(e.what()).find("empty_sample"), std::string::npos);
  }
}

TEST(Distance, ValidationRejectsBadMatrices) {
  MatrixXd asym(2, 2);
  asym << 0, 1, 2, 0;
  EXPECT_THROW(DistanceMatrix{asym}, DataError);
  MatrixXd diag(2, 2);
  diag << 1, 1, 1, 0;
  EXPECT_THROW(DistanceMatrix{diag}, DataError);
  MatrixXd neg(2, 2);
  neg << 0, -1, -1, 0;
  EXPECT_THROW(DistanceMatrix{neg}, DataError);
  MatrixXd inf(2, 2);
  inf << 0, INFINITY, INFINITY, 0;
  EXPECT_THROW(DistanceMatrix{inf}, DataError);
  EXPECT_THROW(parse_distance_kind("manhattan"), UsageError);
  EXPECT_EQ(parse_distance_kind("bray-curtis"), DistanceKind::bray_curtis);
}

TEST(DoubleCenter, TwoPointClosedForm) {
  const double c = 3.0;
  MatrixXd d(2, 2);
  d << 0, c, c, 0;
  const MatrixXd g = double_center(DistanceMatrix(d));
  MatrixXd expected(2, 2);
  expected << 1, -1, -1, 1;
  expected *= c * c / 4.0;
  EXPECT_LE((g - expected).cwiseAbs().maxCoeff(), 1e-14);

  const PcoaResult p = pcoa(DistanceMatrix(d), 1);
  EXPECT_EQ(p.positive_count, 1);
  EXPECT_NEAR(p.eigenvalues(0), c * c / 2.0, 1e-12);
  EXPECT_NEAR(std::abs(p.coordinates(0, 0)), c / 2.0, 1e-12);
  EXPECT_NEAR(p.coordinates(0, 0), -p.coordinates(1, 0), 1e-12);
  EXPECT_DOUBLE_EQ(p.var_explained(0), 1.0);
}

TEST(DoubleCenter, AnnihilatesOnesAndEuclideanGivesGram) {
  const MatrixXd x = random_matrix(12, 4, 2);
  const Centered xc = center_columns(x);
  const MatrixXd g = double_center(euclidean_distance(FeatureMatrix::from(x)));
  EXPECT_LE((g * VectorXd::Ones(12)).norm(), 1e-8 * g.norm());
  EXPECT_LE((g - xc.values * xc.values.transpose()).norm(), 1e-8 * g.norm());
  EXPECT_EQ(double_center(DistanceMatrix(MatrixXd::Zero(3, 3))).norm(), 0.0);
}

TEST(Pcoa, EuclideanReductionMatchesPcaScores) {
  for (Index n : {10, 50})
    for (Index p : {5, 100}) {
      const MatrixXd x = center_columns(random_matrix(n, p, static_cast<std::uint64_t>(n * 1000 + p))).values;
      const Index k = std::min<Index>(3, std::min(n - 1, p));
      const PcoaResult res = pcoa(euclidean_distance(FeatureMatrix::from(x)), k);
      Eigen::JacobiSVD<MatrixXd> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
      const MatrixXd scores = svd.matrixU().leftCols(k) * svd.singularValues().head(k).asDiagonal();
      for (Index r = 0; r < k; ++r) {
        const double sign = scores.col(r).dot(res.coordinates.col(r)) >= 0 ? 1.0 : -1.0;
        EXPECT_LE((res.coordinates.col(r) - sign * scores.col(r)).norm(), 1e-6 * scores.col(r).norm())
            << "n=" << n << " p=" << p << " axis " << r;
      }
    }
}

TEST(Pcoa, ResultInvariants) {
  const MatrixXd x = random_matrix(15, 6, 4);
  const PcoaResult res = pcoa(bray_curtis_distance(FeatureMatrix::from(x.cwiseAbs())), 3);
  for (Index i = 1; i < res.eigenvalues.size(); ++i) EXPECT_GE(res.eigenvalues(i - 1), res.eigenvalues(i));
  for (Index r = 0; r < 3; ++r)
    EXPECT_NEAR(res.coordinates.col(r).squaredNorm(), res.eigenvalues(r), 1e-8 * res.eigenvalues(r));
  EXPECT_LE((res.eigvecs.transpose() * res.eigvecs - MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-8);
  for (Index r = 0; r < 3; ++r) {
    Index arg;
    res.eigvecs.col(r).cwiseAbs().maxCoeff(&arg);
    EXPECT_GT(res.eigvecs(arg, r), 0.0);
  }
}

TEST(Pcoa, IndefiniteConfigurationDropsNegativeEigenvalues) {
  // Four points where one pair violates the triangle inequality badly.
  MatrixXd d(4, 4);
  d << 0, 1, 1, 5,
       1, 0, 1, 1,
       1, 1, 0, 1,
       5, 1, 1, 0;
  const DistanceMatrix dm(d);
  const VectorXd ref = reference_eigenvalues(double_center(dm));
  ASSERT_LT(ref.minCoeff(), -1e-6);
  const PcoaResult res = pcoa(dm, 4);
  Index expected_positive = 0;
  for (Index i = 0; i < 4; ++i) expected_positive += ref(i) > res.eig_tol;
  EXPECT_EQ(res.positive_count, expected_positive);
  EXPECT_LT(res.positive_count, 4);
  EXPECT_EQ(res.k(), res.positive_count);
  EXPECT_FALSE(res.warnings.empty());
  for (Index i = 0; i < 4; ++i) EXPECT_NEAR(res.eigenvalues(i), ref(i), 1e-10);
  EXPECT_NEAR(res.positive_mass(), ref.cwiseMax(0.0).sum(), 1e-10);
}

TEST(Pcoa, PermutationEquivariant) {
  const MatrixXd x = random_matrix(9, 3, 5);
  MatrixXd xp = x;
  std::vector<Index> perm{3, 0, 8, 1, 5, 2, 7, 4, 6};
  for (Index i = 0; i < 9; ++i) xp.row(i) = x.row(perm[static_cast<std::size_t>(i)]);
  const auto a = pcoa(euclidean_distance(FeatureMatrix::from(x)), 2);
  const auto b = pcoa(euclidean_distance(FeatureMatrix::from(xp)), 2);
  for (Index r = 0; r < 2; ++r) {
    VectorXd permuted(9);
    for (Index i = 0; i < 9; ++i) permuted(i) = a.coordinates(perm[static_cast<std::size_t>(i)], r);
    const double sign = permuted.dot(b.coordinates.col(r)) >= 0 ? 1.0 : -1.0;
    EXPECT_LE((permuted - sign * b.coordinates.col(r)).norm(), 1e-8 * permuted.norm());
  }
}

TEST(Pcoa, RejectsNoPositiveEigenvalues) {
  EXPECT_THROW(pcoa(DistanceMatrix(MatrixXd::Zero(3, 3)), 1), NumericalError);
}

TEST(SimilaritySqrt, IdentityAndPsd) {
  EXPECT_LE((similarity_sqrt(MatrixXd::Identity(4, 4)) - MatrixXd::Identity(4, 4)).norm(), 1e-12);
  const MatrixXd a = random_matrix(6, 3, 6);
  const MatrixXd g = a * a.transpose();
  const MatrixXd s = similarity_sqrt(g);
  EXPECT_LE((s * s - g).norm(), 1e-6 * g.norm());
  EXPECT_LE((s - s.transpose()).norm(), 1e-12 * s.norm());
}

TEST(SimilaritySqrt, NegativeEigenvalueZeroed) {
  Eigen::HouseholderQR<MatrixXd> qr(random_matrix(5, 5, 7));
  const MatrixXd q = qr.householderQ();
  VectorXd lam(5);
  lam << 4.0, 2.0, 1.0, 0.5, -1.5;
  const MatrixXd g = q * lam.asDiagonal() * q.transpose();
  VectorXd pos = lam.cwiseMax(0.0);
  const MatrixXd g_plus = q * pos.asDiagonal() * q.transpose();
  const MatrixXd s = similarity_sqrt(g);
  EXPECT_LE((s * s - g_plus).norm(), 1e-6 * g_plus.norm());
}

TEST(SimilaritySqrt, InitialRotationReproducesCoordinates) {
  // With A = H_k, the pseudo-response signal S A equals Z_k.
  const MatrixXd x = random_matrix(20, 8, 8).cwiseAbs();
  const auto d = bray_curtis_distance(FeatureMatrix::from(x));
  const MatrixXd g = double_center(d);
  const PcoaResult p = pcoa_from_similarity(g, 2);
  const MatrixXd s = similarity_sqrt(g, p.eig_tol);
  EXPECT_LE((s * p.eigvecs - p.coordinates).norm(), 1e-8 * p.coordinates.norm());
}
