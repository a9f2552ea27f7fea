#pragma once

// Bayesian sparse PCoA: alternate a horseshoe Gibbs fit of B on the
// pseudo-response Y = G^{1/2} A + E with a Procrustes update of A, where G is
// the double-centred similarity of the chosen dissimilarity.

#include "bspcoa/diagnostics.hpp"
#include "bspcoa/errors.hpp"
#include "bspcoa/ordination.hpp"
#include "bspcoa/random.hpp"
#include "bspcoa/shrinkage.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bspcoa {

struct BspcoaConfig {
  Index k = 2;
  TpbnHyper hyper{};
  bool auto_tau = true; ///< replace hyper.tau by 1/(p n log n) at fit time
  int mcmc_iters = 2000;
  int burn_in = 500;
  double ci_level = 0.95;
  int max_outer = 20;
  double outer_tol = 1e-4;
  std::uint64_t seed = 20240601;
  bool center_X = true;

  void validate() const {
    if (k < 1) throw UsageError("k must be at least 1");
    if (mcmc_iters < 1 || burn_in < 0 || burn_in >= mcmc_iters)
      throw UsageError("burn-in must satisfy 0 <= burn_in < iters");
    if (!(ci_level > 0.0 && ci_level < 1.0)) throw UsageError("ci-level must lie in (0, 1)");
    if (max_outer < 1) throw UsageError("max_outer must be at least 1");
    if (!(outer_tol > 0.0)) throw UsageError("outer_tol must be positive");
    if (!auto_tau) hyper.validate();
    else if (!(hyper.u > 0.0) || !(hyper.a > 0.0)) throw UsageError("u and a must be positive");
  }
};

/// Per-entry posterior summary after credible-interval selection.
struct CiSelection {
  MatrixXd B_hat;
  MatrixXd ci_lower;
  MatrixXd ci_upper;
  std::vector<bool> selected_rows;
};

struct SurrogateFit {
  MatrixXd B_hat;  ///< p x k, zero rows are unselected
  MatrixXd A_hat;  ///< n x k, orthonormal columns
  MatrixXd ci_lower, ci_upper;
  std::vector<bool> selected_rows;
  MatrixXd coordinates; ///< surrogate X B_hat (X centred when configured)
  PcoaResult pcoa;      ///< classical reference Z_k
  double delta_res = 0.0;
  std::optional<double> exi; ///< undefined when no row is selected
  double delta_star = 0.0;
  int outer_iters_used = 0;
  bool converged = false;
  std::vector<double> trace; ///< delta_res per outer iteration
  double tau = 0.0;          ///< effective global scale
  Eigen::RowVectorXd column_means;
  std::vector<std::string> warnings;

  Index k() const { return B_hat.cols(); }
  int n_selected() const {
    return static_cast<int>(std::count(selected_rows.begin(), selected_rows.end(), true));
  }
};

/// Type-7 (linear interpolation) sample quantile of a sorted sample.
inline double sorted_quantile(const std::vector<double> &sorted, double prob) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

inline constexpr std::size_t kMinRetainedDraws = 100;

/// Equal-tailed credible intervals per entry; an entry whose interval covers
/// zero is set to zero, otherwise to its posterior median.
inline CiSelection select_by_ci(const std::vector<MatrixXd> &draws, double level) {
  if (draws.size() < kMinRetainedDraws)
    throw UsageError("select_by_ci: need at least " + std::to_string(kMinRetainedDraws) +
                     " retained draws, got " + std::to_string(draws.size()));
  if (!(level > 0.0 && level < 1.0)) throw UsageError("select_by_ci: level must lie in (0, 1)");
  const Index p = draws.front().rows(), k = draws.front().cols();
  CiSelection out{MatrixXd::Zero(p, k), MatrixXd(p, k), MatrixXd(p, k), std::vector<bool>(p, false)};
  const double tail = 0.5 * (1.0 - level);
  std::vector<double> sample(draws.size());
  for (Index r = 0; r < k; ++r)
    for (Index j = 0; j < p; ++j) {
      for (std::size_t t = 0; t < draws.size(); ++t) sample[t] = draws[t](j, r);
      std::sort(sample.begin(), sample.end());
      const double lo = sorted_quantile(sample, tail);
      const double hi = sorted_quantile(sample, 1.0 - tail);
      out.ci_lower(j, r) = lo;
      out.ci_upper(j, r) = hi;
      if (lo > 0.0 || hi < 0.0) {
        out.B_hat(j, r) = sorted_quantile(sample, 0.5);
        out.selected_rows[j] = true;
      }
    }
  return out;
}

/// Nearest matrix with orthonormal columns to M in Frobenius norm: U V' from
/// the thin SVD M = U D V'. When rank(M) < k the missing left singular
/// directions are completed by Gram-Schmidt on the columns of `previous`
/// (then the canonical basis); `completed` reports whether that happened.
inline MatrixXd procrustes_update(const MatrixXd &M, const MatrixXd &previous = MatrixXd(),
                                  bool *completed = nullptr) {
  const Index n = M.rows(), k = M.cols();
  if (k < 1 || n < k) throw DataError("procrustes_update: need n >= k >= 1");
  Eigen::JacobiSVD<MatrixXd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  MatrixXd U = svd.matrixU();
  const MatrixXd V = svd.matrixV();
  const auto &s = svd.singularValues();
  const double smax = s.size() ? s(0) : 0.0;
  Index rank = 0;
  while (rank < k && s(rank) > 1e-12 * smax && s(rank) > 0.0) ++rank;
  if (completed) *completed = rank < k;
  if (rank < k) {
    Index filled = rank;
    const auto try_add = [&](VectorXd v) {
      for (Index c = 0; c < filled; ++c) v -= U.col(c).dot(v) * U.col(c);
      for (Index c = 0; c < filled; ++c) v -= U.col(c).dot(v) * U.col(c); // re-orthogonalize
      const double nv = v.norm();
      if (nv > 1e-8) {
        U.col(filled++) = v / nv;
      }
    };
    if (previous.rows() == n)
      for (Index c = 0; c < previous.cols() && filled < k; ++c) try_add(previous.col(c));
    for (Index i = 0; i < n && filled < k; ++i) try_add(VectorXd::Unit(n, i));
  }
  return U * V.transpose();
}

namespace detail {

inline void check_fit_inputs(const FeatureMatrix &X, const DistanceMatrix &D, const BspcoaConfig &cfg) {
  cfg.validate();
  X.validate();
  if (D.size() != X.rows())
    throw DataError("distance matrix is " + std::to_string(D.size()) + "x" + std::to_string(D.size()) +
                    " but the feature matrix has " + std::to_string(X.rows()) + " samples");
  if (cfg.mcmc_iters - cfg.burn_in < static_cast<int>(kMinRetainedDraws))
    throw UsageError("iters - burn-in must leave at least " + std::to_string(kMinRetainedDraws) +
                     " retained draws");
}

} // namespace detail

/// Full alternating fit. Diagnostics are computed against Z_k = pcoa(D, k).
inline SurrogateFit fit(const FeatureMatrix &X, const DistanceMatrix &D, const BspcoaConfig &cfg) {
  detail::check_fit_inputs(X, D, cfg);
  const Index n = X.rows(), p = X.cols();

  SurrogateFit out;
  Centered xc;
  if (cfg.center_X) {
    xc = center_columns(X.values);
  } else {
    xc.values = X.values;
    xc.means = Eigen::RowVectorXd::Zero(p);
  }
  out.column_means = xc.means;
  const MatrixXd &Xw = xc.values;

  const MatrixXd G = double_center(D);
  out.pcoa = pcoa_from_similarity(G, cfg.k);
  out.warnings = out.pcoa.warnings;
  const Index k = out.pcoa.k();
  const MatrixXd S = similarity_sqrt(G, out.pcoa.eig_tol);

  TpbnHyper hyper = cfg.hyper;
  if (cfg.auto_tau) hyper.tau = TpbnHyper::default_tau(n, p);
  out.tau = hyper.tau;

  Rng rng(cfg.seed);
  MatrixXd A = out.pcoa.eigvecs;
  TpbnState state = TpbnState::initial(p, k);
  std::vector<MatrixXd> retained(static_cast<std::size_t>(cfg.mcmc_iters - cfg.burn_in));
  MatrixXd previous_B;
  CiSelection sel;

  for (int outer = 1; outer <= cfg.max_outer; ++outer) {
    try {
      const MatrixXd Y = S * A + rng.normal_matrix(n, k);
      const RegressionProblem prob(Xw, Y);
      for (int t = 0; t < cfg.mcmc_iters; ++t) {
        state = gibbs_sweep(state, prob, hyper, rng);
        if (t >= cfg.burn_in) retained[static_cast<std::size_t>(t - cfg.burn_in)] = state.B;
      }
    } catch (const NumericalError &e) {
      throw NumericalError("outer iteration " + std::to_string(outer) + ": " + e.what());
    }
    sel = select_by_ci(retained, cfg.ci_level);

    bool completed = false;
    A = procrustes_update(S * (Xw * sel.B_hat), A, &completed);
    if (completed)
      out.warnings.push_back("outer iteration " + std::to_string(outer) +
                             ": rank-deficient Procrustes target completed from previous A");

    out.trace.push_back(delta(sel.B_hat, Xw, out.pcoa.coordinates));
    out.outer_iters_used = outer;
    if (outer > 1) {
      const double change = (sel.B_hat - previous_B).norm() / std::max(1.0, previous_B.norm());
      if (change < cfg.outer_tol) {
        out.converged = true;
        break;
      }
    }
    previous_B = sel.B_hat;
  }

  out.B_hat = std::move(sel.B_hat);
  out.ci_lower = std::move(sel.ci_lower);
  out.ci_upper = std::move(sel.ci_upper);
  out.selected_rows = std::move(sel.selected_rows);
  out.A_hat = std::move(A);
  out.coordinates = Xw * out.B_hat;
  out.delta_res = out.trace.back();
  if (out.coordinates.norm() > 0.0) out.exi = exi(out.B_hat, Xw, out.pcoa.coordinates);
  else out.warnings.push_back("no rows selected; ExI undefined");
  out.delta_star = delta_star(Xw, out.pcoa.coordinates).delta_star;
  return out;
}

struct SubsampleProjection {
  SurrogateFit fit;
  MatrixXd full_coords;         ///< n x k, every sample embedded by X B_hat
  std::vector<Index> indices;   ///< subsample rows, ascending
  double seconds_subsample_fit = 0.0; ///< distances + fit on the subsample
  double seconds_projection = 0.0;    ///< X_full B_hat
};

/// Fit on m rows drawn without replacement, then embed all n rows linearly.
inline SubsampleProjection subsample_fit_project(const FeatureMatrix &X_full, const BspcoaConfig &cfg,
                                                 Index m, DistanceKind distance, Rng &subsample_rng) {
  using clock = std::chrono::steady_clock;
  X_full.validate();
  const Index n = X_full.rows();
  if (m < 2 || m > n) throw UsageError("subsample size m must satisfy 2 <= m <= n");
  if (m < cfg.k + 1)
    throw UsageError("subsample size m=" + std::to_string(m) + " must exceed k=" + std::to_string(cfg.k));

  // Partial Fisher-Yates, then sort so m = n keeps the original order.
  std::vector<Index> perm(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  for (Index i = 0; i < m; ++i) {
    const auto j = static_cast<std::size_t>(i) +
                   subsample_rng.below(static_cast<std::size_t>(n - i));
    std::swap(perm[static_cast<std::size_t>(i)], perm[j]);
  }
  SubsampleProjection out;
  out.indices.assign(perm.begin(), perm.begin() + m);
  std::sort(out.indices.begin(), out.indices.end());

  FeatureMatrix sub;
  sub.values.resize(m, X_full.cols());
  sub.col_ids = X_full.col_ids;
  for (Index r = 0; r < m; ++r) {
    const Index src = out.indices[static_cast<std::size_t>(r)];
    sub.values.row(r) = X_full.values.row(src);
    sub.row_ids.push_back(X_full.row_ids[static_cast<std::size_t>(src)]);
  }

  const auto t0 = clock::now();
  const DistanceMatrix D = compute_distance(distance, sub);
  out.fit = fit(sub, D, cfg);
  const auto t1 = clock::now();
  out.full_coords = (X_full.values.rowwise() - out.fit.column_means) * out.fit.B_hat;
  const auto t2 = clock::now();
  out.seconds_subsample_fit = std::chrono::duration<double>(t1 - t0).count();
  out.seconds_projection = std::chrono::duration<double>(t2 - t1).count();
  return out;
}

} // namespace bspcoa
