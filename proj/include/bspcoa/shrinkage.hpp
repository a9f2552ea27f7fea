#pragma once

// Horseshoe / three-parameter-beta-normal Gibbs updates for the row-sparse
// multivariate regression Y = X B + E, E ~ MN(0, I_n, I_k):
//
//   B | psi        ~ MN(V X'Y, V, I_k),  V = (X'X + diag(1/psi))^{-1}
//   psi_j | ...    ~ GIG(u - k/2, b = ||b_j||^2, a = 2 zeta_j)
//   zeta_j | psi_j ~ Gamma(shape a + u, rate tau + psi_j)

#include "bspcoa/errors.hpp"
#include "bspcoa/gig.hpp"
#include "bspcoa/random.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace bspcoa {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

struct TpbnHyper {
  double u = 0.5;
  double a = 0.5;
  double tau = 1.0;

  /// u = a = 1/2 and tau = 1 / (p n log n).
  static TpbnHyper horseshoe(Index n, Index p) {
    TpbnHyper h;
    h.tau = default_tau(n, p);
    return h;
  }

  static double default_tau(Index n, Index p) {
    if (n < 2 || p < 1) throw UsageError("default tau needs n >= 2 and p >= 1");
    return 1.0 / (static_cast<double>(p) * static_cast<double>(n) * std::log(static_cast<double>(n)));
  }

  void validate() const {
    if (!(u > 0.0) || !(a > 0.0) || !(tau > 0.0) || !std::isfinite(u) || !std::isfinite(a) ||
        !std::isfinite(tau))
      throw UsageError("TPBN hyperparameters u, a, tau must be finite and positive");
  }
};

struct TpbnState {
  MatrixXd B;    ///< p x k
  VectorXd psi;  ///< local scales, > 0
  VectorXd zeta; ///< auxiliary scales, > 0

  static TpbnState initial(Index p, Index k) {
    return {MatrixXd::Zero(p, k), VectorXd::Ones(p), VectorXd::Ones(p)};
  }
};

/// Smallest ||b_j||^2 handed to the GIG sampler; keeps b > 0 for zero rows.
inline constexpr double kRowNormFloor = 1e-300;

/// Regression data with the cross products reused by every sweep.
struct RegressionProblem {
  MatrixXd X;   ///< n x p
  MatrixXd Y;   ///< n x k
  MatrixXd XtX; ///< p x p
  MatrixXd XtY; ///< p x k

  RegressionProblem(MatrixXd x, MatrixXd y) : X(std::move(x)), Y(std::move(y)) {
    if (X.rows() != Y.rows())
      throw DataError("regression: X has " + std::to_string(X.rows()) + " rows but Y has " +
                      std::to_string(Y.rows()));
    XtX = X.transpose() * X;
    XtY = X.transpose() * Y;
  }

  Index n() const { return X.rows(); }
  Index p() const { return X.cols(); }
  Index k() const { return Y.cols(); }
};

namespace detail {

inline void check_positive(const VectorXd &v, const char *name) {
  for (Index j = 0; j < v.size(); ++j)
    if (!(v(j) > 0.0) || !std::isfinite(v(j)))
      throw NumericalError(std::string(name) + "[" + std::to_string(j) +
                           "] must be finite and positive");
}

/// Cholesky of a symmetric positive-definite matrix with escalating diagonal
/// jitter (1e-12 .. 1e-6, relative to the mean diagonal).
inline Eigen::LLT<MatrixXd> jittered_llt(MatrixXd q, const char *what) {
  Eigen::LLT<MatrixXd> llt(q);
  if (llt.info() == Eigen::Success) return llt;
  const double scale = std::max(1.0, q.diagonal().cwiseAbs().mean());
  double added = 0.0;
  for (double jitter = 1e-12; jitter <= 1e-6 * 1.0001; jitter *= 10.0) {
    q.diagonal().array() += jitter * scale - added;
    added = jitter * scale;
    llt.compute(q);
    if (llt.info() == Eigen::Success) return llt;
  }
  throw NumericalError(std::string(what) + " is not positive definite after jitter");
}

} // namespace detail

/// Posterior mean V X'Y of B given psi (dense p x p route).
inline MatrixXd posterior_mean_B(const RegressionProblem &prob, const VectorXd &psi) {
  MatrixXd q = prob.XtX;
  q.diagonal() += psi.cwiseInverse();
  auto llt = detail::jittered_llt(std::move(q), "X'X + diag(1/psi)");
  return llt.solve(prob.XtY);
}

/// Draw B ~ MN(V X'Y, V, I_k). For p > n the draw uses the Woodbury form
/// B = U + Psi X' (X Psi X' + I)^{-1} (Y - X U - W), U_j ~ N(0, psi_j), W ~ N(0, I),
/// which costs O(n^2 p) instead of O(p^3).
inline MatrixXd update_B(const RegressionProblem &prob, const VectorXd &psi, Rng &rng) {
  if (psi.size() != prob.p())
    throw DataError("update_B: psi has length " + std::to_string(psi.size()) + ", expected " +
                    std::to_string(prob.p()));
  detail::check_positive(psi, "psi");
  const Index n = prob.n(), p = prob.p(), k = prob.k();

  if (p > n) {
    const VectorXd sd = psi.cwiseSqrt();
    MatrixXd u = rng.normal_matrix(p, k);
    u = sd.asDiagonal() * u;
    const MatrixXd w = rng.normal_matrix(n, k);
    const MatrixXd x_psi = prob.X * psi.asDiagonal(); // n x p
    MatrixXd s = x_psi * prob.X.transpose();
    s.diagonal().array() += 1.0;
    auto llt = detail::jittered_llt(std::move(s), "X Psi X' + I");
    const MatrixXd resid = prob.Y - prob.X * u - w;
    return u + x_psi.transpose() * llt.solve(resid);
  }

  MatrixXd q = prob.XtX;
  q.diagonal() += psi.cwiseInverse();
  auto llt = detail::jittered_llt(std::move(q), "X'X + diag(1/psi)");
  const MatrixXd mean = llt.solve(prob.XtY);
  // q = L L'  =>  L'^{-1} Z has covariance q^{-1}.
  const MatrixXd z = rng.normal_matrix(p, k);
  return mean + llt.matrixU().solve(z);
}

inline MatrixXd update_B(const MatrixXd &Y, const MatrixXd &X, const VectorXd &psi, Rng &rng) {
  return update_B(RegressionProblem(X, Y), psi, rng);
}

/// psi_j ~ GIG(u - k/2, b = max(||b_j||^2, floor), a = 2 zeta_j), independently.
inline VectorXd update_psi(const MatrixXd &B, const VectorXd &zeta, const TpbnHyper &hyper,
                           Rng &rng) {
  if (zeta.size() != B.rows()) throw DataError("update_psi: zeta length does not match B rows");
  detail::check_positive(zeta, "zeta");
  const double order = hyper.u - 0.5 * static_cast<double>(B.cols());
  VectorXd psi(B.rows());
  for (Index j = 0; j < B.rows(); ++j) {
    GigParams gp{order, 2.0 * zeta(j), std::max(B.row(j).squaredNorm(), kRowNormFloor)};
    // Draws can underflow when the row is (near) zero.
    psi(j) = std::max(sample_gig(gp, rng), std::numeric_limits<double>::min());
  }
  return psi;
}

/// zeta_j ~ Gamma(shape a + u, rate tau + psi_j), independently.
inline VectorXd update_zeta(const VectorXd &psi, const TpbnHyper &hyper, Rng &rng) {
  detail::check_positive(psi, "psi");
  VectorXd zeta(psi.size());
  for (Index j = 0; j < psi.size(); ++j)
    zeta(j) = std::max(rng.gamma(hyper.a + hyper.u, hyper.tau + psi(j)),
                       std::numeric_limits<double>::min());
  return zeta;
}

/// One sweep in the order B, psi, zeta. The input state is not modified.
inline TpbnState gibbs_sweep(const TpbnState &state, const RegressionProblem &prob,
                             const TpbnHyper &hyper, Rng &rng) {
  TpbnState next;
  next.B = update_B(prob, state.psi, rng);
  next.psi = update_psi(next.B, state.zeta, hyper, rng);
  next.zeta = update_zeta(next.psi, hyper, rng);
  return next;
}

inline TpbnState gibbs_sweep(const TpbnState &state, const MatrixXd &Y, const MatrixXd &X,
                             const TpbnHyper &hyper, Rng &rng) {
  return gibbs_sweep(state, RegressionProblem(X, Y), hyper, rng);
}

} // namespace bspcoa
