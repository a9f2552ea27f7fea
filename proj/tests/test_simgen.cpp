#include "bspcoa/simgen.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <vector>

using namespace bspcoa;

namespace {

double sample_cov(const MatrixXd &x, Index a, Index b) {
  const double ma = x.col(a).mean(), mb = x.col(b).mean();
  return ((x.col(a).array() - ma) * (x.col(b).array() - mb)).sum() / static_cast<double>(x.rows() - 1);
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

bool same_metrics(const MethodMetrics &a, const MethodMetrics &b) {
  return same_bits(a.var_pc1, b.var_pc1) && same_bits(a.var_pc2, b.var_pc2) &&
         same_bits(a.silhouette, b.silhouette) && same_bits(a.delta_res, b.delta_res) &&
         same_bits(a.bm_acc, b.bm_acc) && same_bits(a.exi, b.exi);
}

StudyOptions tiny_study() {
  StudyOptions opt;
  opt.spec.n_A = opt.spec.n_B = 15;
  opt.spec.p = 30;
  opt.replicates = 4;
  opt.cfg.mcmc_iters = 300;
  opt.cfg.burn_in = 100;
  opt.cfg.max_outer = 2;
  opt.seed = 77;
  return opt;
}

} // namespace

TEST(LatentFactor, CovarianceStructure) {
  LatentFactorSpec spec;
  spec.n = 5000;
  spec.p = 8;
  spec.p1 = 2;
  spec.p2 = 5;
  Rng rng(1);
  const MatrixXd x = gen_latent_factor(spec, rng).values;
  const double n = 5000.0;
  // Var of a sample covariance of bivariate normals: (s_ab^2 + s_aa s_bb) / n.
  const auto se = [&](double saa, double sbb, double sab) { return std::sqrt((sab * sab + saa * sbb) / n); };
  EXPECT_NEAR(sample_cov(x, 0, 0), 11.0, 3 * se(11, 11, 11));
  EXPECT_NEAR(sample_cov(x, 0, 1), 10.0, 3 * se(11, 11, 10));
  EXPECT_NEAR(sample_cov(x, 2, 2), 21.0, 3 * se(21, 21, 21));
  EXPECT_NEAR(sample_cov(x, 3, 4), 20.0, 3 * se(21, 21, 20));
  EXPECT_NEAR(sample_cov(x, 0, 2), 0.0, 3 * se(11, 21, 0));
  for (Index j = 5; j < 8; ++j) EXPECT_NEAR(sample_cov(x, j, j), 1.0, 3 * se(1, 1, 1));
  for (Index a = 5; a < 8; ++a)
    for (Index b = a + 1; b < 8; ++b)
      EXPECT_LT(std::abs(sample_cov(x, a, b) / std::sqrt(sample_cov(x, a, a) * sample_cov(x, b, b))), 0.05);
}

TEST(LatentFactor, DegenerateFactorIsPureNoise) {
  LatentFactorSpec spec;
  spec.n = 5000;
  spec.var_v1 = 0.0;
  Rng rng(2);
  const MatrixXd x = gen_latent_factor(spec, rng).values;
  EXPECT_NEAR(sample_cov(x, 0, 0), 1.0, 3 * std::sqrt(2.0 / 5000.0));
  EXPECT_NEAR(sample_cov(x, 0, 5), 0.0, 3 * std::sqrt(1.0 / 5000.0));
  spec.p1 = 4;
  EXPECT_THROW(gen_latent_factor(spec, rng), UsageError);
}

TEST(DirMult, ConcentrationLayout) {
  DirMultSpec spec;
  const VectorXd a = spec.concentrations(false), b = spec.concentrations(true);
  for (Index j = 0; j < 5; ++j) {
    EXPECT_EQ(a(j), 6.0);
    EXPECT_EQ(a(j + 5), 2.0);
    EXPECT_EQ(b(j), 2.0);
    EXPECT_EQ(b(j + 5), 6.0);
  }
  for (Index j = 10; j < spec.p; ++j) EXPECT_EQ(a(j), 0.5);
  spec.p = 9;
  EXPECT_THROW(spec.validate(), UsageError);
}

TEST(DirMult, RowSumsAndLibrarySizes) {
  DirMultSpec spec;
  spec.n_A = spec.n_B = 250;
  Rng rng(3);
  const DirMultSample s = gen_dirmult(spec, rng);
  ASSERT_EQ(s.counts.rows(), 500);
  for (Index i = 0; i < 500; ++i) {
    EXPECT_EQ(s.counts.values.row(i).sum(), s.library_sizes(i));
    for (Index j = 0; j < spec.p; ++j) {
      const double c = s.counts.values(i, j);
      ASSERT_GE(c, 0.0);
      ASSERT_EQ(c, std::floor(c));
    }
  }
  EXPECT_NEAR(s.library_sizes.mean(), 8000.0, 3 * std::sqrt(8000.0 / 500.0));
  EXPECT_EQ(s.labels[0], 0);
  EXPECT_EQ(s.labels[499], 1);
  EXPECT_EQ(s.counts.row_ids[250], "B1");
}

TEST(DirMult, ExpectedComposition) {
  DirMultSpec spec;
  spec.n_A = 2000;
  spec.n_B = 1;
  spec.lib_mean = 8000.0;
  Rng rng(4);
  const DirMultSample s = gen_dirmult(spec, rng);
  const MatrixXd rel = relative_abundance(s.counts.values.topRows(2000));
  const double mean = rel.col(0).mean();
  const double sd = std::sqrt((rel.col(0).array() - mean).square().sum() / 1999.0);
  EXPECT_NEAR(mean, 6.0 / 85.0, 3 * sd / std::sqrt(2000.0));
}

TEST(DirMult, DirichletSumsToOne) {
  Rng rng(5);
  DirMultSpec spec;
  for (int t = 0; t < 200; ++t)
    ASSERT_NEAR(sample_dirichlet(spec.concentrations(t % 2), rng).sum(), 1.0, 1e-12);
}

TEST(DirMult, GroupSwapSymmetry) {
  DirMultSpec spec;
  spec.n_A = spec.n_B = 1000;
  spec.p = 20;
  Rng rng(6);
  const DirMultSample s = gen_dirmult(spec, rng);
  const MatrixXd rel = relative_abundance(s.counts.values);
  const double a_first = rel.topRows(1000).leftCols(5).mean();
  const double b_second = rel.bottomRows(1000).middleCols(5, 5).mean();
  const double a_second = rel.topRows(1000).middleCols(5, 5).mean();
  const double b_first = rel.bottomRows(1000).leftCols(5).mean();
  EXPECT_NEAR(a_first, b_second, 0.05 * a_first);
  EXPECT_NEAR(a_second, b_first, 0.05 * a_second);
  EXPECT_GT(a_first, 2.0 * a_second);
}

TEST(DirMult, PerturbationKeepsConservation) {
  DirMultSpec spec = scenario_spec(Scenario::perturbed);
  spec.n_A = spec.n_B = 20;
  Rng rng(7);
  const DirMultSample s = gen_dirmult(spec, rng);
  for (Index i = 0; i < s.counts.rows(); ++i) EXPECT_EQ(s.counts.values.row(i).sum(), s.library_sizes(i));
  EXPECT_EQ(spec.alpha_bg, 0.1);
  EXPECT_EQ(spec.perturb_sd, 0.3);
  EXPECT_EQ(scenario_spec(Scenario::sparse).alpha_bg, 0.1);
  EXPECT_EQ(scenario_spec(Scenario::baseline).alpha_bg, 0.5);
  EXPECT_THROW(parse_scenario("dense"), UsageError);
}

TEST(Study, InvariantToThreadCountAndOrder) {
  StudyOptions one = tiny_study();
  one.threads = 1;
  StudyOptions two = tiny_study();
  two.threads = 2;
  const auto a = run_study(one), b = run_study(two);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t r = 0; r < a.size(); ++r) {
    EXPECT_TRUE(same_metrics(a[r].pcoa, b[r].pcoa)) << r;
    EXPECT_TRUE(same_metrics(a[r].bspcoa, b[r].bspcoa)) << r;
  }
  const ReplicateMetrics third = run_replicate(one, 2);
  EXPECT_TRUE(same_metrics(third.bspcoa, a[2].bspcoa));
}

TEST(Study, SingleReplicateDeterministic) {
  StudyOptions opt = tiny_study();
  opt.replicates = 1;
  const auto a = run_study(opt), b = run_study(opt);
  ASSERT_EQ(a.size(), 1u);
  EXPECT_TRUE(same_metrics(a[0].pcoa, b[0].pcoa));
  EXPECT_TRUE(same_metrics(a[0].bspcoa, b[0].bspcoa));
  EXPECT_GE(a[0].pcoa.bm_acc, 0.5);
  EXPECT_TRUE(std::isnan(a[0].pcoa.delta_res));
}

TEST(Study, SummarySkipsNan) {
  std::vector<MethodMetrics> rows(3);
  rows[0].bm_acc = 1.0;
  rows[1].bm_acc = 0.5;
  rows[2].bm_acc = 0.75;
  rows[1].exi = 0.4;
  const MetricSummary s = summarize(rows);
  EXPECT_DOUBLE_EQ(s.mean.bm_acc, 0.75);
  EXPECT_DOUBLE_EQ(s.sd.bm_acc, 0.25);
  EXPECT_DOUBLE_EQ(s.mean.exi, 0.4);
  EXPECT_EQ(s.sd.exi, 0.0);
  EXPECT_TRUE(std::isnan(s.mean.delta_res));
}

TEST(TwoGroup, ShiftedInformativeFeatures) {
  TwoGroupSpec spec;
  spec.n_A = spec.n_B = 2000;
  Rng rng(8);
  const TwoGroupSample s = gen_two_group(spec, rng);
  const MatrixXd &x = s.features.values;
  EXPECT_NEAR(x.topRows(2000).col(0).mean(), -2.0, 3 / std::sqrt(2000.0));
  EXPECT_NEAR(x.bottomRows(2000).col(1).mean(), 2.0, 3 / std::sqrt(2000.0));
  EXPECT_NEAR(x.bottomRows(2000).col(5).mean(), 0.0, 3 / std::sqrt(2000.0));
  EXPECT_EQ(s.labels[1999], 0);
  EXPECT_EQ(s.labels[2000], 1);
}
