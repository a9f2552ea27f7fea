#pragma once

// Surrogate-quality diagnostics for Z_k ≈ X B and ordination summaries.

#include "bspcoa/clustering.hpp"
#include "bspcoa/errors.hpp"
#include "bspcoa/ordination.hpp"

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <cmath>
#include <optional>
#include <vector>

namespace bspcoa {

/// Relative reconstruction error ||Z - X B||_F / ||Z||_F. Unbounded above.
inline double delta(const MatrixXd &B, const MatrixXd &X, const MatrixXd &Z) {
  const double zn = Z.norm();
  if (!(zn > 0.0)) throw NumericalError("delta: coordinates have zero norm");
  return (Z - X * B).norm() / zn;
}

/// Frobenius cosine between X B and Z.
inline double exi(const MatrixXd &B, const MatrixXd &X, const MatrixXd &Z) {
  const MatrixXd xb = X * B;
  const double xbn = xb.norm(), zn = Z.norm();
  if (!(xbn > 0.0) || !(zn > 0.0)) throw NumericalError("ExI: cosine undefined for a zero-norm argument");
  return (xb.cwiseProduct(Z)).sum() / (xbn * zn);
}

/// Moore-Penrose pseudoinverse; singular values below rel_cutoff * sigma_max are dropped.
inline MatrixXd pseudoinverse(const MatrixXd &X, double rel_cutoff = 1e-10) {
  Eigen::BDCSVD<MatrixXd> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto &s = svd.singularValues();
  const double cut = s.size() ? rel_cutoff * s(0) : 0.0;
  VectorXd inv = VectorXd::Zero(s.size());
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) inv(i) = 1.0 / s(i);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

struct BestSurrogate {
  double delta_star = 0.0;
  MatrixXd B_star; ///< X^+ Z
};

/// Smallest achievable delta over all B, with minimizer B* = X^+ Z.
inline BestSurrogate delta_star(const MatrixXd &X, const MatrixXd &Z) {
  if (X.rows() != Z.rows()) throw DataError("delta_star: X and Z row counts differ");
  const double zn = Z.norm();
  if (!(zn > 0.0)) throw NumericalError("delta_star: coordinates have zero norm");
  BestSurrogate out;
  out.B_star = pseudoinverse(X) * Z;
  const double d = (Z - X * out.B_star).norm() / zn;
  out.delta_star = std::clamp(d, 0.0, 1.0);
  return out;
}

/// Fraction of positive-eigenvalue mass on each retained PCoA axis.
inline VectorXd variance_explained(const PcoaResult &p) {
  if (p.positive_count < 1) throw NumericalError("variance_explained: no positive eigenvalues");
  return p.eigenvalues.head(p.k()) / p.positive_mass();
}

/// Surrogate counterpart: ||(X B)_{.r}||^2 over the positive-eigenvalue mass.
inline VectorXd surrogate_variance_explained(const MatrixXd &XB, const PcoaResult &p) {
  const double mass = p.positive_mass();
  if (!(mass > 0.0)) throw NumericalError("surrogate variance: no positive eigenvalue mass");
  return XB.colwise().squaredNorm().transpose() / mass;
}

/// Adjusted variance of loadings B (columns normalized to unit length): with
/// X B = Q R, the r-th component explains R_rr^2 / tr(X'X). Zero columns
/// explain nothing.
inline VectorXd adjusted_variance(const MatrixXd &X, const MatrixXd &B) {
  const double total = X.squaredNorm();
  if (!(total > 0.0)) throw NumericalError("adjusted variance: X has zero variance");
  MatrixXd loadings = B;
  std::vector<Index> live;
  for (Index c = 0; c < B.cols(); ++c) {
    const double nrm = B.col(c).norm();
    if (nrm > 0.0) {
      loadings.col(c) /= nrm;
      live.push_back(c);
    }
  }
  VectorXd out = VectorXd::Zero(B.cols());
  if (live.empty()) return out;
  MatrixXd scores(X.rows(), static_cast<Index>(live.size()));
  for (std::size_t i = 0; i < live.size(); ++i) scores.col(static_cast<Index>(i)) = X * loadings.col(live[i]);
  Eigen::HouseholderQR<MatrixXd> qr(scores);
  const MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (std::size_t i = 0; i < live.size(); ++i) {
    const double rii = r(static_cast<Index>(i), static_cast<Index>(i));
    out(live[i]) = rii * rii / total;
  }
  return out;
}

/// Affine map of all entries onto [0, 1]: min -> 0, max -> 1.
inline MatrixXd rescale_loadings(const MatrixXd &B) {
  if (B.size() == 0) throw DataError("rescale_loadings: empty matrix");
  const double lo = B.minCoeff(), hi = B.maxCoeff();
  if (!(hi > lo)) throw DataError("rescale_loadings: matrix is constant");
  return (B.array() - lo) / (hi - lo);
}

struct DiagnosticsReport {
  double delta_B = 0.0;
  std::optional<double> exi_B; ///< undefined when X B = 0
  double delta_star = 0.0;
  double exi_star = 0.0;
  std::vector<double> var_explained_pc;
  std::vector<double> var_explained_surrogate;
  std::optional<double> silhouette_2d;
  std::optional<double> silhouette_2d_pcoa;
  std::optional<double> bm_acc;
  std::optional<double> bm_acc_pcoa;
  int n_selected_taxa = 0;
};

/// Flat key-value record. Missing optional values serialize as null.
inline nlohmann::ordered_json to_json(const DiagnosticsReport &r) {
  const auto opt = [](const std::optional<double> &v) -> nlohmann::ordered_json {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
  };
  nlohmann::ordered_json j;
  j["delta_B"] = r.delta_B;
  j["exi_B"] = opt(r.exi_B);
  j["delta_star"] = r.delta_star;
  j["exi_star"] = r.exi_star;
  j["var_explained_pc"] = r.var_explained_pc;
  j["var_explained_surrogate"] = r.var_explained_surrogate;
  j["silhouette_2d"] = opt(r.silhouette_2d);
  j["silhouette_2d_pcoa"] = opt(r.silhouette_2d_pcoa);
  j["bm_acc"] = opt(r.bm_acc);
  j["bm_acc_pcoa"] = opt(r.bm_acc_pcoa);
  j["n_selected_taxa"] = r.n_selected_taxa;
  return j;
}

/// Core surrogate diagnostics for a given B against classical coordinates.
inline DiagnosticsReport diagnose(const MatrixXd &B, const MatrixXd &X, const PcoaResult &p) {
  const MatrixXd &Z = p.coordinates;
  DiagnosticsReport r;
  r.delta_B = delta(B, X, Z);
  if ((X * B).norm() > 0.0) r.exi_B = exi(B, X, Z);
  const BestSurrogate best = delta_star(X, Z);
  r.delta_star = best.delta_star;
  // X B* = P_X Z; when that vanishes the cosine limit is 0.
  r.exi_star = (X * best.B_star).norm() > 1e-14 * Z.norm() ? exi(best.B_star, X, Z) : 0.0;
  const VectorXd ve = variance_explained(p);
  r.var_explained_pc.assign(ve.data(), ve.data() + ve.size());
  const VectorXd vs = surrogate_variance_explained(X * B, p);
  r.var_explained_surrogate.assign(vs.data(), vs.data() + vs.size());
  for (Index j = 0; j < B.rows(); ++j)
    if (B.row(j).cwiseAbs().maxCoeff() > 0.0) ++r.n_selected_taxa;
  return r;
}

} // namespace bspcoa
