#pragma once

// Simulation generators: the two-factor Euclidean model and the two-group
// Dirichlet-multinomial microbiome model, plus the replicate study driver.

#include "bspcoa/clustering.hpp"
#include "bspcoa/diagnostics.hpp"
#include "bspcoa/errors.hpp"
#include "bspcoa/ordination.hpp"
#include "bspcoa/random.hpp"
#include "bspcoa/surrogate.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <exception>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace bspcoa {

/// X_j = V1 + e_j for j <= p1, X_j = V2 + e_j for p1 < j <= p2, X_j = e_j
/// otherwise; V1 ~ N(0, var_v1), V2 ~ N(0, var_v2), e_j ~ N(0, 1), all
/// independent and fresh for every row.
struct LatentFactorSpec {
  Index n = 50;
  Index p = 10;
  Index p1 = 1;
  Index p2 = 4;
  double var_v1 = 10.0;
  double var_v2 = 20.0;

  void validate() const {
    if (n < 2) throw UsageError("latent factor: n must be at least 2");
    if (!(1 <= p1 && p1 < p2 && p2 <= p)) throw UsageError("latent factor: need 1 <= p1 < p2 <= p");
    if (!(var_v1 >= 0.0) || !(var_v2 >= 0.0)) throw UsageError("latent factor: variances must be >= 0");
  }
};

inline FeatureMatrix gen_latent_factor(const LatentFactorSpec &spec, Rng &rng) {
  spec.validate();
  MatrixXd x(spec.n, spec.p);
  const double sd1 = std::sqrt(spec.var_v1), sd2 = std::sqrt(spec.var_v2);
  for (Index i = 0; i < spec.n; ++i) {
    const double v1 = sd1 * rng.normal();
    const double v2 = sd2 * rng.normal();
    for (Index j = 0; j < spec.p; ++j) {
      const double factor = j < spec.p1 ? v1 : (j < spec.p2 ? v2 : 0.0);
      x(i, j) = factor + rng.normal();
    }
  }
  return FeatureMatrix::from(std::move(x));
}

/// Group A concentrations (6 x5, 2 x5, alpha ...), group B (2 x5, 6 x5, alpha ...).
struct DirMultSpec {
  Index n_A = 50;
  Index n_B = 50;
  Index p = 100;
  double alpha_bg = 0.5;
  double lib_mean = 8000.0;
  double perturb_sd = 0.0; ///< > 0: per-sample log-normal jitter of background alpha

  void validate() const {
    if (n_A < 1 || n_B < 1) throw UsageError("dirichlet-multinomial: both groups need samples");
    if (p < 10) throw UsageError("dirichlet-multinomial: p must be at least 10");
    if (!(alpha_bg > 0.0)) throw UsageError("dirichlet-multinomial: alpha must be positive");
    if (!(lib_mean > 0.0)) throw UsageError("dirichlet-multinomial: library mean must be positive");
    if (!(perturb_sd >= 0.0)) throw UsageError("dirichlet-multinomial: perturbation sd must be >= 0");
  }

  VectorXd concentrations(bool group_b) const {
    VectorXd a = VectorXd::Constant(p, alpha_bg);
    for (Index j = 0; j < 5; ++j) {
      a(j) = group_b ? 2.0 : 6.0;
      a(j + 5) = group_b ? 6.0 : 2.0;
    }
    return a;
  }
};

/// Dirichlet draw by normalized Gamma variates.
inline VectorXd sample_dirichlet(const VectorXd &alpha, Rng &rng) {
  VectorXd g(alpha.size());
  for (;;) {
    for (Index j = 0; j < alpha.size(); ++j) g(j) = rng.gamma(alpha(j), 1.0);
    const double total = g.sum();
    if (total > 0.0) return g / total;
  }
}

/// Multinomial draw by sequential conditional binomials; counts sum to `trials`.
inline Eigen::VectorXd sample_multinomial(std::int64_t trials, const VectorXd &prob, Rng &rng) {
  VectorXd counts = VectorXd::Zero(prob.size());
  std::int64_t left = trials;
  double mass_left = 1.0;
  for (Index j = 0; j + 1 < prob.size() && left > 0; ++j) {
    const double q = mass_left > 0.0 ? std::clamp(prob(j) / mass_left, 0.0, 1.0) : 0.0;
    const std::int64_t c = q >= 1.0 ? left : rng.binomial(left, q);
    counts(j) = static_cast<double>(c);
    left -= c;
    mass_left -= prob(j);
  }
  if (prob.size() > 0) counts(prob.size() - 1) += static_cast<double>(left);
  return counts;
}

struct DirMultSample {
  CountTable counts;
  std::vector<int> labels; ///< 0 = group A, 1 = group B, in generation order
  VectorXd library_sizes;
};

inline DirMultSample gen_dirmult(const DirMultSpec &spec, Rng &rng) {
  spec.validate();
  const Index n = spec.n_A + spec.n_B;
  DirMultSample out;
  MatrixXd counts(n, spec.p);
  out.library_sizes.resize(n);
  out.labels.resize(static_cast<std::size_t>(n));
  const VectorXd alpha_a = spec.concentrations(false);
  const VectorXd alpha_b = spec.concentrations(true);
  std::vector<std::string> ids;
  for (Index i = 0; i < n; ++i) {
    const bool group_b = i >= spec.n_A;
    out.labels[static_cast<std::size_t>(i)] = group_b ? 1 : 0;
    ids.push_back((group_b ? "B" : "A") + std::to_string(group_b ? i - spec.n_A + 1 : i + 1));
    VectorXd alpha = group_b ? alpha_b : alpha_a;
    if (spec.perturb_sd > 0.0)
      for (Index j = 10; j < spec.p; ++j) alpha(j) *= std::exp(spec.perturb_sd * rng.normal());
    const std::int64_t lib = rng.poisson(spec.lib_mean);
    out.library_sizes(i) = static_cast<double>(lib);
    counts.row(i) = sample_multinomial(lib, sample_dirichlet(alpha, rng), rng).transpose();
  }
  out.counts = FeatureMatrix::from(std::move(counts));
  out.counts.row_ids = std::move(ids);
  for (Index j = 0; j < spec.p; ++j) out.counts.col_ids[static_cast<std::size_t>(j)] = "OTU" + std::to_string(j + 1);
  return out;
}

/// Two Gaussian groups in p dimensions: every entry N(0, 1), plus +shift/2 on
/// the first `informative` features for group B and -shift/2 for group A.
struct TwoGroupSpec {
  Index n_A = 500;
  Index n_B = 500;
  Index p = 10;
  Index informative = 2;
  double shift = 4.0;

  void validate() const {
    if (n_A < 1 || n_B < 1) throw UsageError("two-group: both groups need samples");
    if (informative < 1 || informative > p) throw UsageError("two-group: need 1 <= informative <= p");
    if (!std::isfinite(shift)) throw UsageError("two-group: shift must be finite");
  }
};

struct TwoGroupSample {
  FeatureMatrix features;
  std::vector<int> labels;
};

inline TwoGroupSample gen_two_group(const TwoGroupSpec &spec, Rng &rng) {
  spec.validate();
  const Index n = spec.n_A + spec.n_B;
  MatrixXd x = rng.normal_matrix(n, spec.p);
  TwoGroupSample out;
  out.labels.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    const bool group_b = i >= spec.n_A;
    out.labels[static_cast<std::size_t>(i)] = group_b ? 1 : 0;
    x.row(i).head(spec.informative).array() += (group_b ? 0.5 : -0.5) * spec.shift;
  }
  out.features = FeatureMatrix::from(std::move(x));
  return out;
}

enum class Scenario { baseline, sparse, perturbed };

inline std::string_view to_string(Scenario s) {
  switch (s) {
  case Scenario::baseline: return "baseline";
  case Scenario::sparse: return "sparse";
  case Scenario::perturbed: return "perturbed";
  }
  return "unknown";
}

inline Scenario parse_scenario(std::string_view name) {
  if (name == "baseline") return Scenario::baseline;
  if (name == "sparse") return Scenario::sparse;
  if (name == "perturbed") return Scenario::perturbed;
  throw UsageError("unknown scenario '" + std::string(name) +
                   "' (valid scenarios: baseline, sparse, perturbed)");
}

/// baseline: alpha = 0.5; sparse: alpha = 0.1; perturbed: alpha = 0.1 with
/// log-normal background jitter (sd 0.3).
inline DirMultSpec scenario_spec(Scenario s) {
  DirMultSpec spec;
  switch (s) {
  case Scenario::baseline: spec.alpha_bg = 0.5; break;
  case Scenario::sparse: spec.alpha_bg = 0.1; break;
  case Scenario::perturbed:
    spec.alpha_bg = 0.1;
    spec.perturb_sd = 0.3;
    break;
  }
  return spec;
}

/// How counts enter the surrogate regression X.
enum class SurrogateFeatures { counts, relative_abundance };

struct StudyOptions {
  Scenario scenario = Scenario::baseline;
  DirMultSpec spec = scenario_spec(Scenario::baseline);
  int replicates = 100;
  BspcoaConfig cfg{};
  SurrogateFeatures features = SurrogateFeatures::counts;
  int kmeans_restarts = 10;
  std::uint64_t seed = 1;
  unsigned threads = 0; ///< 0 = hardware concurrency
};

/// One method's metrics for one replicate. delta_res/ExI are NaN for PCoA.
struct MethodMetrics {
  double var_pc1 = 0.0; ///< percent
  double var_pc2 = 0.0; ///< percent
  double silhouette = 0.0;
  double delta_res = std::numeric_limits<double>::quiet_NaN();
  double bm_acc = 0.0;
  double exi = std::numeric_limits<double>::quiet_NaN();
};

struct ReplicateMetrics {
  MethodMetrics pcoa;
  MethodMetrics bspcoa;
  int n_selected = 0;
};

inline MatrixXd relative_abundance(const MatrixXd &counts) {
  MatrixXd out = counts;
  for (Index i = 0; i < out.rows(); ++i) {
    const double total = out.row(i).sum();
    if (!(total > 0.0)) throw DataError("relative abundance: sample " + std::to_string(i + 1) + " has zero total");
    out.row(i) /= total;
  }
  return out;
}

/// Generate, ordinate (Bray-Curtis, k = 2), fit and score one replicate.
/// The replicate's randomness depends only on (opt.seed, index).
inline ReplicateMetrics run_replicate(const StudyOptions &opt, int index) {
  const Rng root(opt.seed);
  Rng data_rng = root.split(2 * static_cast<std::uint64_t>(index));
  Rng eval_rng = root.split(2 * static_cast<std::uint64_t>(index) + 1);
  const DirMultSample data = gen_dirmult(opt.spec, data_rng);

  FeatureMatrix features = data.counts;
  if (opt.features == SurrogateFeatures::relative_abundance)
    features.values = relative_abundance(data.counts.values);

  const DistanceMatrix D = bray_curtis_distance(data.counts);
  BspcoaConfig cfg = opt.cfg;
  cfg.k = 2;
  cfg.seed = splitmix64(opt.seed ^ splitmix64(0xB5BC0AULL + static_cast<std::uint64_t>(index)));
  const SurrogateFit f = fit(features, D, cfg);
  const PcoaResult &pc = f.pcoa;

  ReplicateMetrics m;
  const VectorXd ve = variance_explained(pc);
  m.pcoa.var_pc1 = 100.0 * ve(0);
  m.pcoa.var_pc2 = ve.size() > 1 ? 100.0 * ve(1) : 0.0;
  m.pcoa.silhouette = silhouette(pc.coordinates, data.labels);
  m.pcoa.bm_acc = bm_acc(data.labels, pc.coordinates, opt.kmeans_restarts, eval_rng);

  const VectorXd vs = surrogate_variance_explained(f.coordinates, pc);
  m.bspcoa.var_pc1 = 100.0 * vs(0);
  m.bspcoa.var_pc2 = vs.size() > 1 ? 100.0 * vs(1) : 0.0;
  m.bspcoa.delta_res = f.delta_res;
  m.bspcoa.exi = f.exi.value_or(std::numeric_limits<double>::quiet_NaN());
  m.n_selected = f.n_selected();
  if (f.coordinates.norm() > 0.0 &&
      (f.coordinates.rowwise() - f.coordinates.row(0)).cwiseAbs().maxCoeff() > 0.0) {
    m.bspcoa.silhouette = silhouette(f.coordinates, data.labels);
    m.bspcoa.bm_acc = bm_acc(data.labels, f.coordinates, opt.kmeans_restarts, eval_rng);
  } else {
    m.bspcoa.silhouette = 0.0;
    m.bspcoa.bm_acc = 0.5;
  }
  return m;
}

/// All replicates; index r always uses the same streams, so the table does not
/// depend on thread count or execution order.
inline std::vector<ReplicateMetrics> run_study(const StudyOptions &opt) {
  if (opt.replicates < 1) throw UsageError("replicates must be at least 1");
  std::vector<ReplicateMetrics> rows(static_cast<std::size_t>(opt.replicates));
  unsigned threads = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(opt.replicates));
  if (threads <= 1) {
    for (int r = 0; r < opt.replicates; ++r) rows[static_cast<std::size_t>(r)] = run_replicate(opt, r);
    return rows;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      try {
        for (int r = static_cast<int>(t); r < opt.replicates; r += static_cast<int>(threads))
          rows[static_cast<std::size_t>(r)] = run_replicate(opt, r);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  for (auto &th : pool) th.join();
  for (auto &e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

struct MetricSummary {
  MethodMetrics mean;
  MethodMetrics sd;
};

/// Mean and sample SD (n - 1) of every metric; NaN entries are skipped.
inline MetricSummary summarize(const std::vector<MethodMetrics> &rows) {
  const auto stat = [&](double MethodMetrics::*field, double &mean, double &sd) {
    double s = 0.0, ss = 0.0;
    int count = 0;
    for (const auto &r : rows)
      if (!std::isnan(r.*field)) {
        s += r.*field;
        ++count;
      }
    if (count == 0) {
      mean = sd = std::numeric_limits<double>::quiet_NaN();
      return;
    }
    mean = s / count;
    for (const auto &r : rows)
      if (!std::isnan(r.*field)) ss += (r.*field - mean) * (r.*field - mean);
    sd = count > 1 ? std::sqrt(ss / (count - 1)) : 0.0;
  };
  MetricSummary out;
  stat(&MethodMetrics::var_pc1, out.mean.var_pc1, out.sd.var_pc1);
  stat(&MethodMetrics::var_pc2, out.mean.var_pc2, out.sd.var_pc2);
  stat(&MethodMetrics::silhouette, out.mean.silhouette, out.sd.silhouette);
  stat(&MethodMetrics::delta_res, out.mean.delta_res, out.sd.delta_res);
  stat(&MethodMetrics::bm_acc, out.mean.bm_acc, out.sd.bm_acc);
  stat(&MethodMetrics::exi, out.mean.exi, out.sd.exi);
  return out;
}

} // namespace bspcoa
