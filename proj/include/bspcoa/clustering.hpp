#pragma once

// k-means (k-means++ seeding, Lloyd iterations), silhouette width and
// best-matched two-group accuracy on low-dimensional embeddings.

#include "bspcoa/errors.hpp"
#include "bspcoa/random.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <vector>

namespace bspcoa {

using Eigen::Index;
using Eigen::MatrixXd;

struct KMeansOptions {
  int clusters = 2;
  int restarts = 10;
  int max_iter = 300;
};

struct KMeansResult {
  std::vector<int> labels;
  MatrixXd centers;
  double inertia = std::numeric_limits<double>::infinity();
};

namespace detail {

inline KMeansResult kmeans_once(const MatrixXd &x, int clusters, int max_iter, Rng &rng) {
  const Index n = x.rows();
  MatrixXd centers(clusters, x.cols());
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());

  // k-means++ seeding
  centers.row(0) = x.row(static_cast<Index>(rng.below(static_cast<std::size_t>(n))));
  for (int c = 1; c < clusters; ++c) {
    double total = 0.0;
    for (Index i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], (x.row(i) - centers.row(c - 1)).squaredNorm());
      total += d2[i];
    }
    Index pick = n - 1;
    if (total > 0.0) {
      double target = rng.uniform() * total;
      for (Index i = 0; i < n; ++i) {
        target -= d2[i];
        if (target <= 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Index>(rng.below(static_cast<std::size_t>(n)));
    }
    centers.row(c) = x.row(pick);
  }

  KMeansResult out;
  out.labels.assign(n, -1);
  for (int iter = 0; iter < max_iter; ++iter) {
    bool changed = false;
    for (Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (int c = 0; c < clusters; ++c) {
        const double d = (x.row(i) - centers.row(c)).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (out.labels[i] != best) {
        out.labels[i] = best;
        changed = true;
      }
    }
    if (!changed && iter > 0) break;
    MatrixXd sums = MatrixXd::Zero(clusters, x.cols());
    std::vector<Index> counts(clusters, 0);
    for (Index i = 0; i < n; ++i) {
      sums.row(out.labels[i]) += x.row(i);
      ++counts[out.labels[i]];
    }
    for (int c = 0; c < clusters; ++c)
      if (counts[c] > 0) centers.row(c) = sums.row(c) / static_cast<double>(counts[c]);
  }
  out.inertia = 0.0;
  for (Index i = 0; i < n; ++i) out.inertia += (x.row(i) - centers.row(out.labels[i])).squaredNorm();
  out.centers = std::move(centers);
  return out;
}

} // namespace detail

/// Best-inertia solution over restarts; ties keep the first.
inline KMeansResult kmeans(const MatrixXd &x, const KMeansOptions &opt, Rng &rng) {
  if (opt.clusters < 1 || x.rows() < opt.clusters)
    throw UsageError("k-means: need at least as many points as clusters");
  KMeansResult best;
  for (int r = 0; r < std::max(1, opt.restarts); ++r) {
    KMeansResult run = detail::kmeans_once(x, opt.clusters, opt.max_iter, rng);
    if (run.inertia < best.inertia) best = std::move(run);
  }
  return best;
}

/// Mean silhouette width under Euclidean distance in the embedding.
/// Points in singleton clusters contribute 0.
inline double silhouette(const MatrixXd &coords, const std::vector<int> &labels) {
  const Index n = coords.rows();
  if (static_cast<Index>(labels.size()) != n) throw DataError("silhouette: label count mismatch");
  if (n < 3) throw DataError("silhouette: need at least 3 points");
  std::map<int, int> index;
  for (int l : labels) index.emplace(l, 0);
  if (index.size() < 2) throw DataError("silhouette: need at least two clusters");
  int next = 0;
  for (auto &[label, slot] : index) slot = next++;
  const int nc = next;
  std::vector<int> lab(n);
  std::vector<Index> size(nc, 0);
  for (Index i = 0; i < n; ++i) {
    lab[i] = index[labels[i]];
    ++size[lab[i]];
  }

  double total = 0.0;
  std::vector<double> sums(nc);
  for (Index i = 0; i < n; ++i) {
    if (size[lab[i]] == 1) continue;
    std::fill(sums.begin(), sums.end(), 0.0);
    for (Index j = 0; j < n; ++j)
      if (j != i) sums[lab[j]] += (coords.row(i) - coords.row(j)).norm();
    const double a = sums[lab[i]] / static_cast<double>(size[lab[i]] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (int c = 0; c < nc; ++c)
      if (c != lab[i]) b = std::min(b, sums[c] / static_cast<double>(size[c]));
    const double denom = std::max(a, b);
    total += denom > 0.0 ? (b - a) / denom : 0.0;
  }
  return total / static_cast<double>(n);
}

/// Silhouette of a two-dimensional embedding.
inline double silhouette_2d(const MatrixXd &coords, const std::vector<int> &labels) {
  if (coords.cols() != 2) throw DataError("silhouette_2d: embedding must have two columns");
  return silhouette(coords, labels);
}

/// Agreement between two binary labelings, maximized over the two label matchings.
inline double best_matched_accuracy(const std::vector<int> &truth, const std::vector<int> &clusters) {
  if (truth.size() != clusters.size() || truth.empty())
    throw DataError("best-matched accuracy: label vectors differ in length");
  std::vector<int> groups = truth;
  std::sort(groups.begin(), groups.end());
  groups.erase(std::unique(groups.begin(), groups.end()), groups.end());
  if (groups.size() != 2) throw DataError("best-matched accuracy: exactly two true groups required");
  std::size_t same = 0;
  for (std::size_t i = 0; i < truth.size(); ++i)
    same += ((truth[i] == groups[1]) == (clusters[i] == 1)) ? 1 : 0;
  const double acc = static_cast<double>(same) / static_cast<double>(truth.size());
  return std::max(acc, 1.0 - acc);
}

/// k-means with k = 2 on the embedding, then best-matched accuracy against truth.
inline double bm_acc(const std::vector<int> &truth, const MatrixXd &coords, int restarts, Rng &rng) {
  if (static_cast<Index>(truth.size()) != coords.rows())
    throw DataError("bm_acc: label count does not match coordinates");
  if (coords.rows() < 2 || (coords.rowwise() - coords.row(0)).cwiseAbs().maxCoeff() == 0.0)
    throw DataError("bm_acc: coordinates are degenerate (all identical)");
  KMeansOptions opt;
  opt.clusters = 2;
  opt.restarts = restarts;
  const KMeansResult km = kmeans(coords, opt, rng);
  return best_matched_accuracy(truth, km.labels);
}

} // namespace bspcoa
