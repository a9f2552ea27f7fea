#pragma once

// Classical principal coordinates analysis: dissimilarities, Gower double
// centering, positive-part eigendecomposition and the similarity square root.

#include "bspcoa/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

namespace bspcoa {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Samples in rows, features (taxa) in columns.
struct FeatureMatrix {
  MatrixXd values;
  std::vector<std::string> row_ids;
  std::vector<std::string> col_ids;

  Index rows() const { return values.rows(); }
  Index cols() const { return values.cols(); }

  /// Wraps a bare matrix, labelling rows S1.. and columns X1...
  static FeatureMatrix from(MatrixXd values) {
    FeatureMatrix out;
    out.row_ids.reserve(values.rows());
    out.col_ids.reserve(values.cols());
    for (Index i = 0; i < values.rows(); ++i) out.row_ids.push_back("S" + std::to_string(i + 1));
    for (Index j = 0; j < values.cols(); ++j) out.col_ids.push_back("X" + std::to_string(j + 1));
    out.values = std::move(values);
    return out;
  }

  void validate() const {
    if (values.rows() < 2 || values.cols() < 1)
      throw DataError("feature matrix needs at least 2 rows and 1 column, got " +
                      std::to_string(values.rows()) + "x" + std::to_string(values.cols()));
    if (static_cast<Index>(row_ids.size()) != values.rows() ||
        static_cast<Index>(col_ids.size()) != values.cols())
      throw DataError("feature matrix labels do not match its shape");
    if (!values.allFinite()) throw DataError("feature matrix contains non-finite entries");
  }
};

/// Count tables share the feature-matrix layout; cells are nonnegative.
using CountTable = FeatureMatrix;

/// Symmetric, nonnegative, zero-diagonal n x n dissimilarity matrix.
class DistanceMatrix {
public:
  DistanceMatrix() = default;

  explicit DistanceMatrix(MatrixXd values) : values_(std::move(values)) { validate(); }

  const MatrixXd &values() const noexcept { return values_; }
  Index size() const noexcept { return values_.rows(); }
  double operator()(Index i, Index j) const { return values_(i, j); }

private:
  void validate() const {
    const Index n = values_.rows();
    if (n != values_.cols()) throw DataError("distance matrix must be square");
    if (!values_.allFinite()) throw DataError("distance matrix contains non-finite entries");
    const double scale = std::max(1.0, values_.cwiseAbs().maxCoeff());
    for (Index i = 0; i < n; ++i) {
      if (values_(i, i) != 0.0) throw DataError("distance matrix diagonal must be exactly zero");
      for (Index j = 0; j < n; ++j) {
        if (values_(i, j) < 0.0) throw DataError("distance matrix has a negative entry");
        if (std::abs(values_(i, j) - values_(j, i)) > 1e-12 * scale)
          throw DataError("distance matrix is not symmetric");
      }
    }
  }

  MatrixXd values_;
};

enum class DistanceKind { euclidean, bray_curtis, hellinger };

inline std::string_view to_string(DistanceKind kind) {
  switch (kind) {
  case DistanceKind::euclidean: return "euclidean";
  case DistanceKind::bray_curtis: return "bray-curtis";
  case DistanceKind::hellinger: return "hellinger";
  }
  return "unknown";
}

inline DistanceKind parse_distance_kind(std::string_view name) {
  if (name == "euclidean") return DistanceKind::euclidean;
  if (name == "bray-curtis" || name == "braycurtis" || name == "bray_curtis")
    return DistanceKind::bray_curtis;
  if (name == "hellinger") return DistanceKind::hellinger;
  throw UsageError("unknown distance '" + std::string(name) +
                   "' (expected euclidean, bray-curtis or hellinger)");
}

namespace detail {

// Each entry is accumulated independently, in column order, so the result
// does not depend on how pairs are scheduled.
template <class PairFn>
MatrixXd pairwise(const MatrixXd &x, PairFn &&fn) {
  const Index n = x.rows();
  MatrixXd d = MatrixXd::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      const double v = fn(i, j);
      d(i, j) = v;
      d(j, i) = v;
    }
  return d;
}

inline MatrixXd euclidean_rows(const MatrixXd &x) {
  const MatrixXd xt = x.transpose(); // contiguous rows
  return pairwise(x, [&](Index i, Index j) {
    double s = 0.0;
    for (Index c = 0; c < xt.rows(); ++c) {
      const double diff = xt(c, i) - xt(c, j);
      s += diff * diff;
    }
    return std::sqrt(s);
  });
}

} // namespace detail

inline DistanceMatrix euclidean_distance(const FeatureMatrix &x) {
  if (!x.values.allFinite()) throw DataError("euclidean distance: non-finite input");
  return DistanceMatrix(detail::euclidean_rows(x.values));
}

/// d(i,i') = sum_k |x_ik - x_i'k| / sum_k (x_ik + x_i'k), on raw counts.
inline DistanceMatrix bray_curtis_distance(const FeatureMatrix &x) {
  if (!x.values.allFinite()) throw DataError("bray-curtis distance: non-finite input");
  if ((x.values.array() < 0.0).any()) throw DataError("bray-curtis distance: negative entry");
  const MatrixXd xt = x.values.transpose();
  const auto label = [&](Index i) {
    return i < static_cast<Index>(x.row_ids.size()) ? x.row_ids[i] : std::to_string(i + 1);
  };
  return DistanceMatrix(detail::pairwise(x.values, [&](Index i, Index j) {
    double num = 0.0, den = 0.0;
    for (Index c = 0; c < xt.rows(); ++c) {
      num += std::abs(xt(c, i) - xt(c, j));
      den += xt(c, i) + xt(c, j);
    }
    if (den == 0.0)
      throw DataError("bray-curtis distance: samples '" + label(i) + "' and '" + label(j) +
                      "' are both all-zero");
    return num / den;
  }));
}

/// Row-wise sqrt of relative abundances; Euclidean distance on this is Hellinger.
inline MatrixXd hellinger_transform(const FeatureMatrix &x) {
  if (!x.values.allFinite()) throw DataError("hellinger transform: non-finite input");
  if ((x.values.array() < 0.0).any()) throw DataError("hellinger transform: negative entry");
  MatrixXd out(x.rows(), x.cols());
  for (Index i = 0; i < x.rows(); ++i) {
    const double total = x.values.row(i).sum();
    if (!(total > 0.0)) {
      const std::string id = i < static_cast<Index>(x.row_ids.size()) ? x.row_ids[i]
                                                                       : std::to_string(i + 1);
      throw DataError("hellinger distance: sample '" + id + "' has zero total abundance");
    }
    out.row(i) = (x.values.row(i).array() / total).sqrt();
  }
  return out;
}

inline DistanceMatrix hellinger_distance(const FeatureMatrix &x) {
  return DistanceMatrix(detail::euclidean_rows(hellinger_transform(x)));
}

inline DistanceMatrix compute_distance(DistanceKind kind, const FeatureMatrix &x) {
  switch (kind) {
  case DistanceKind::euclidean: return euclidean_distance(x);
  case DistanceKind::bray_curtis: return bray_curtis_distance(x);
  case DistanceKind::hellinger: return hellinger_distance(x);
  }
  throw UsageError("unknown distance kind");
}

/// G = -1/2 J D^(2) J with J = I - 11'/n.
inline MatrixXd double_center(const DistanceMatrix &d) {
  const MatrixXd sq = d.values().array().square().matrix();
  const VectorXd row_means = sq.rowwise().mean();
  const VectorXd col_means = sq.colwise().mean().transpose();
  const double grand = sq.mean();
  MatrixXd g(sq.rows(), sq.cols());
  for (Index j = 0; j < sq.cols(); ++j)
    for (Index i = 0; i < sq.rows(); ++i)
      g(i, j) = -0.5 * (sq(i, j) - row_means(i) - col_means(j) + grand);
  // Symmetrize away round-off from the two mean vectors.
  return 0.5 * (g + g.transpose());
}

/// Symmetric eigendecomposition sorted by descending eigenvalue, with each
/// eigenvector's largest-magnitude entry made positive.
struct SortedEigen {
  VectorXd values;
  MatrixXd vectors;
};

inline void canonicalize_sign(MatrixXd &vectors) {
  for (Index c = 0; c < vectors.cols(); ++c) {
    Index arg = 0;
    double best = -1.0;
    for (Index r = 0; r < vectors.rows(); ++r) {
      // First-encountered maximum wins so ties are deterministic.
      if (std::abs(vectors(r, c)) > best + 1e-12 * std::max(1.0, best)) {
        best = std::abs(vectors(r, c));
        arg = r;
      }
    }
    if (vectors(arg, c) < 0.0) vectors.col(c) *= -1.0;
  }
}

inline SortedEigen sorted_eigen(const MatrixXd &g) {
  if (g.rows() != g.cols()) throw DataError("eigendecomposition: matrix must be square");
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale)
    throw NumericalError("eigendecomposition: matrix is not symmetric within tolerance");
  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(g);
  if (solver.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  SortedEigen out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  canonicalize_sign(out.vectors);
  return out;
}

/// Default "positive" threshold: 1e-10 * max(1, lambda_1).
inline double default_eig_tol(const VectorXd &descending_eigenvalues) {
  const double top = descending_eigenvalues.size() ? descending_eigenvalues(0) : 0.0;
  return 1e-10 * std::max(1.0, top);
}

struct PcoaResult {
  VectorXd eigenvalues;     ///< all n, descending
  Index positive_count = 0; ///< eigenvalues above eig_tol
  MatrixXd coordinates;     ///< Z_k = H_k Lambda_k^{1/2}, n x k
  MatrixXd eigvecs;         ///< H_k, n x k
  VectorXd var_explained;   ///< lambda_r / sum of positive eigenvalues
  double eig_tol = 0.0;
  std::vector<std::string> warnings;

  Index k() const { return coordinates.cols(); }
  double positive_mass() const {
    return eigenvalues.head(positive_count).sum();
  }
};

/// Classical PCoA from a double-centred similarity matrix. Pass eig_tol <= 0
/// for the default threshold.
inline PcoaResult pcoa_from_similarity(const MatrixXd &g, Index k, double eig_tol = -1.0) {
  const Index n = g.rows();
  if (k < 1 || k > n)
    throw UsageError("pcoa: k must lie in [1, " + std::to_string(n) + "], got " + std::to_string(k));
  SortedEigen eig = sorted_eigen(g);
  PcoaResult out;
  out.eig_tol = eig_tol > 0.0 ? eig_tol : default_eig_tol(eig.values);
  out.eigenvalues = eig.values;
  out.positive_count = (eig.values.array() > out.eig_tol).count();
  if (out.positive_count == 0) throw NumericalError("pcoa: no positive eigenvalues");
  if (k > out.positive_count) {
    out.warnings.push_back("requested k=" + std::to_string(k) + " exceeds the " +
                           std::to_string(out.positive_count) +
                           " positive eigenvalues; truncated");
    k = out.positive_count;
  }
  out.eigvecs = eig.vectors.leftCols(k);
  const VectorXd roots = eig.values.head(k).cwiseSqrt();
  out.coordinates = out.eigvecs * roots.asDiagonal();
  out.var_explained = eig.values.head(k) / out.positive_mass();
  return out;
}

inline PcoaResult pcoa(const DistanceMatrix &d, Index k, double eig_tol = -1.0) {
  return pcoa_from_similarity(double_center(d), k, eig_tol);
}

/// H_+ Lambda_+^{1/2} H_+' over eigenvalues above eig_tol (<= 0 for default).
inline MatrixXd similarity_sqrt(const MatrixXd &g, double eig_tol = -1.0) {
  SortedEigen eig = sorted_eigen(g);
  const double tol = eig_tol > 0.0 ? eig_tol : default_eig_tol(eig.values);
  const Index m = (eig.values.array() > tol).count();
  if (m == 0) throw NumericalError("similarity square root: no positive eigenvalues");
  const MatrixXd h = eig.vectors.leftCols(m);
  const VectorXd roots = eig.values.head(m).cwiseSqrt();
  MatrixXd out = h * roots.asDiagonal() * h.transpose();
  return 0.5 * (out + out.transpose());
}

/// Column-centred copy together with the removed means.
struct Centered {
  MatrixXd values;
  Eigen::RowVectorXd means;
};

inline Centered center_columns(const MatrixXd &x) {
  Centered out;
  out.means = x.colwise().mean();
  out.values = x.rowwise() - out.means;
  return out;
}

} // namespace bspcoa
