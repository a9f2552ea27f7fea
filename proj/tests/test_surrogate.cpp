#include "bspcoa/diagnostics.hpp"
#include "bspcoa/simgen.hpp"
#include "bspcoa/surrogate.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace bspcoa;

namespace {

std::vector<MatrixXd> scalar_draws(const std::vector<double> &v) {
  std::vector<MatrixXd> out;
  for (double x : v) out.push_back(MatrixXd::Constant(1, 1, x));
  return out;
}

MatrixXd random_stiefel(Index n, Index k, Rng &rng) {
  Eigen::HouseholderQR<MatrixXd> qr(rng.normal_matrix(n, k));
  return qr.householderQ() * MatrixXd::Identity(n, k);
}

BspcoaConfig quick_config(Index k) {
  BspcoaConfig cfg;
  cfg.k = k;
  cfg.mcmc_iters = 800;
  cfg.burn_in = 200;
  cfg.max_outer = 4;
  return cfg;
}

FeatureMatrix latent_small(std::uint64_t seed) {
  LatentFactorSpec spec;
  spec.var_v1 = 20.0;
  spec.var_v2 = 10.0;
  Rng rng(seed);
  return gen_latent_factor(spec, rng);
}

} // namespace

TEST(SelectByCi, NormalDrawsMatchQuantiles) {
  Rng rng(1);
  std::vector<double> v(20000);
  for (auto &x : v) x = 3.0 + rng.normal();
  const CiSelection s = select_by_ci(scalar_draws(v), 0.95);
  EXPECT_TRUE(s.selected_rows[0]);
  EXPECT_NEAR(s.B_hat(0, 0), 3.0, 3 * 1.2533 / std::sqrt(20000.0));
  EXPECT_NEAR(s.ci_lower(0, 0), 3.0 - 1.959964, 0.05 * (3.0 - 1.959964));
  EXPECT_NEAR(s.ci_upper(0, 0), 3.0 + 1.959964, 0.05 * (3.0 + 1.959964));
}

TEST(SelectByCi, PositiveKeepsMedianSymmetricZeroes) {
  std::vector<MatrixXd> draws;
  for (int t = 0; t < 101; ++t) {
    MatrixXd b(2, 2);
    b << 1.0 + t, t - 50.0, 0.0, 0.0;
    draws.push_back(b);
  }
  const CiSelection s = select_by_ci(draws, 0.95);
  EXPECT_EQ(s.B_hat(0, 0), 51.0);
  EXPECT_EQ(s.B_hat(0, 1), 0.0);
  EXPECT_TRUE(s.selected_rows[0]);
  EXPECT_FALSE(s.selected_rows[1]);
  EXPECT_EQ(s.B_hat.row(1), Eigen::RowVectorXd::Zero(2));
}

TEST(SelectByCi, SurvivorsAreExactMedians) {
  Rng rng(2);
  std::vector<MatrixXd> draws;
  for (int t = 0; t < 301; ++t) draws.push_back(rng.normal_matrix(4, 3) + MatrixXd::Constant(4, 3, 1.5));
  const CiSelection s = select_by_ci(draws, 0.9);
  for (Index j = 0; j < 4; ++j)
    for (Index r = 0; r < 3; ++r) {
      if (s.B_hat(j, r) == 0.0) continue;
      std::vector<double> col;
      for (const auto &d : draws) col.push_back(d(j, r));
      std::nth_element(col.begin(), col.begin() + 150, col.end());
      EXPECT_EQ(s.B_hat(j, r), col[150]);
    }
}

TEST(SelectByCi, TooFewDraws) {
  EXPECT_THROW(select_by_ci(scalar_draws(std::vector<double>(99, 1.0)), 0.95), UsageError);
}

TEST(Procrustes, FixedPointAndScaleInvariance) {
  Rng rng(3);
  const MatrixXd q = random_stiefel(7, 3, rng);
  EXPECT_LE((procrustes_update(q) - q).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LE((procrustes_update(4.5 * q) - q).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Procrustes, BeatsRandomOrthonormalCandidates) {
  Rng rng(4);
  const MatrixXd m = rng.normal_matrix(6, 2);
  const MatrixXd a = procrustes_update(m);
  EXPECT_LE((a.transpose() * a - MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-12);
  const double best = (m - a).norm();
  for (int t = 0; t < 10000; ++t) ASSERT_GE((m - random_stiefel(6, 2, rng)).norm(), best - 1e-12);
}

TEST(Procrustes, RankDeficientCompletion) {
  Rng rng(5);
  const VectorXd u = rng.normal_matrix(6, 1).col(0);
  MatrixXd m(6, 2);
  m << u, 2.0 * u;
  const MatrixXd prev = random_stiefel(6, 2, rng);
  bool completed = false;
  const MatrixXd a = procrustes_update(m, prev, &completed);
  EXPECT_TRUE(completed);
  EXPECT_LE((a.transpose() * a - MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_EQ(a, procrustes_update(m, prev));
  EXPECT_NO_THROW(procrustes_update(MatrixXd::Zero(5, 2)));
}

TEST(Fit, StructuralInvariantsAndDeterminism) {
  const FeatureMatrix x = latent_small(6);
  const DistanceMatrix d = euclidean_distance(x);
  const BspcoaConfig cfg = quick_config(2);
  const SurrogateFit f = fit(x, d, cfg);
  EXPECT_LE((f.A_hat.transpose() * f.A_hat - MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-8);
  for (Index j = 0; j < f.B_hat.rows(); ++j)
    EXPECT_EQ(f.selected_rows[static_cast<std::size_t>(j)], f.B_hat.row(j).cwiseAbs().maxCoeff() > 0.0);
  if (f.exi) EXPECT_LE(*f.exi * *f.exi, 1.0 + 1e-12);
  EXPECT_GE(f.delta_res, f.delta_star - 1e-12);
  EXPECT_EQ(static_cast<int>(f.trace.size()), f.outer_iters_used);

  const SurrogateFit g = fit(x, d, cfg);
  EXPECT_EQ(f.B_hat, g.B_hat);
  EXPECT_EQ(f.A_hat, g.A_hat);
  EXPECT_EQ(f.trace, g.trace);
}

TEST(Fit, EuclideanReducesToExactSurrogate) {
  const FeatureMatrix x = latent_small(7);
  const SurrogateFit f = fit(x, euclidean_distance(x), quick_config(2));
  EXPECT_LE(f.delta_star, 1e-8);
}

TEST(Fit, RankOneSignalRecoversDirection) {
  Rng rng(1);
  const Index n = 200, p = 6;
  VectorXd w(p);
  w << 1, -1, 1, 0, 0, 0;
  w.normalize();
  const VectorXd s = 5.0 * rng.normal_matrix(n, 1).col(0);
  const MatrixXd values = s * w.transpose() + rng.normal_matrix(n, p);
  const FeatureMatrix x = FeatureMatrix::from(values);
  BspcoaConfig cfg;
  cfg.k = 1;
  const SurrogateFit f = fit(x, euclidean_distance(x), cfg);
  ASSERT_GT(f.B_hat.norm(), 0.0);
  EXPECT_GT(std::abs(f.B_hat.col(0).dot(w)) / f.B_hat.col(0).norm(), 0.99);
}

TEST(Fit, RejectsMismatchedDistance) {
  const FeatureMatrix x = latent_small(9);
  FeatureMatrix fewer = x;
  fewer.values = x.values.topRows(10);
  fewer.row_ids.resize(10);
  EXPECT_THROW(fit(x, euclidean_distance(fewer), quick_config(2)), DataError);
}

TEST(Fit, LatentFactorSupport) {
  // Component 1 carries the shared factor of X2..X4, component 2 that of X1.
  const FeatureMatrix x = latent_small(10);
  const SurrogateFit f = fit(x, euclidean_distance(x), BspcoaConfig{});
  std::vector<int> axis1, axis2;
  for (Index j = 0; j < x.cols(); ++j) {
    if (f.B_hat(j, 0) != 0.0) axis1.push_back(static_cast<int>(j));
    if (f.B_hat(j, 1) != 0.0) axis2.push_back(static_cast<int>(j));
  }
  EXPECT_EQ(axis1, (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(axis2, (std::vector<int>{0}));
}

TEST(Fit, WideLatentFactorSupport) {
  LatentFactorSpec spec;
  spec.p = 100;
  spec.p1 = 3;
  spec.p2 = 8;
  Rng rng(11);
  const FeatureMatrix x = gen_latent_factor(spec, rng);
  const SurrogateFit f = fit(x, euclidean_distance(x), BspcoaConfig{});
  for (Index j = 0; j < 10; ++j) {
    if (j >= 8) {
      EXPECT_EQ(f.B_hat.row(j).cwiseAbs().maxCoeff(), 0.0) << "X" << j + 1;
    } else if (j < 3) {
      EXPECT_EQ(f.B_hat(j, 0), 0.0) << "X" << j + 1;
    } else {
      EXPECT_EQ(f.B_hat(j, 1), 0.0) << "X" << j + 1;
    }
  }
}

TEST(Fit, DeltaTraceStabilizes) {
  const FeatureMatrix x = latent_small(12);
  const BspcoaConfig cfg;
  const SurrogateFit f = fit(x, euclidean_distance(x), cfg);
  ASSERT_GE(f.trace.size(), 2u);
  const double last = f.trace[f.trace.size() - 1], prev = f.trace[f.trace.size() - 2];
  EXPECT_LT(std::abs(last - prev), 5 * cfg.outer_tol) << "trace ends " << prev << ", " << last;
}

TEST(Subsample, FullSizeEqualsFit) {
  const FeatureMatrix x = latent_small(13);
  const BspcoaConfig cfg = quick_config(2);
  Rng sub(14);
  const SubsampleProjection s = subsample_fit_project(x, cfg, x.rows(), DistanceKind::euclidean, sub);
  const SurrogateFit f = fit(x, euclidean_distance(x), cfg);
  EXPECT_EQ(s.fit.B_hat, f.B_hat);
  EXPECT_LE((s.full_coords - f.coordinates).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Subsample, DrawsDistinctSortedRows) {
  const FeatureMatrix x = latent_small(15);
  Rng sub(16);
  const SubsampleProjection s = subsample_fit_project(x, quick_config(2), 20, DistanceKind::euclidean, sub);
  ASSERT_EQ(s.indices.size(), 20u);
  for (std::size_t i = 1; i < s.indices.size(); ++i) EXPECT_LT(s.indices[i - 1], s.indices[i]);
  EXPECT_EQ(s.full_coords.rows(), x.rows());
  Rng sub2(16);
  EXPECT_THROW(subsample_fit_project(x, quick_config(2), 2, DistanceKind::euclidean, sub2), UsageError);
  EXPECT_THROW(subsample_fit_project(x, quick_config(2), 51, DistanceKind::euclidean, sub2), UsageError);
}
