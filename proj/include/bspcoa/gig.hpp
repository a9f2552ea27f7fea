#pragma once

// Generalized inverse Gaussian variates.
//
// Parameterization: density f(x) ∝ x^(order-1) exp(-(a*x + b/x) / 2), x > 0.
// The local-scale update passes order = u - k/2, b = ||b_j||^2, a = 2*zeta_j.
//
// Sampling follows Hörmann & Leydold (2014): the problem is reduced to the
// one-parameter density x^(lambda-1) exp(-omega/2 (x + 1/x)) with lambda >= 0,
// which is drawn by ratio-of-uniforms (with or without mode shift) or by a
// three-piece rejection hat for small omega.

#include "bspcoa/errors.hpp"
#include "bspcoa/random.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace bspcoa {

struct GigParams {
  double order = 0.0;
  double a = 0.0; ///< coefficient of x
  double b = 0.0; ///< coefficient of 1/x

  void validate() const {
    if (!std::isfinite(order) || !std::isfinite(a) || !std::isfinite(b) || a < 0.0 || b < 0.0)
      throw UsageError("GIG: parameters must be finite with a, b >= 0");
    if (a == 0.0 && b == 0.0) throw UsageError("GIG: a and b cannot both be zero");
    if (order <= 0.0 && b <= 0.0) throw UsageError("GIG: order <= 0 requires b > 0");
    if (order >= 0.0 && a <= 0.0) throw UsageError("GIG: order >= 0 requires a > 0");
  }
};

namespace detail {

inline double gig_mode(double lambda, double omega) {
  if (lambda >= 1.0)
    return (std::sqrt((lambda - 1.0) * (lambda - 1.0) + omega * omega) + (lambda - 1.0)) / omega;
  return omega / (std::sqrt((1.0 - lambda) * (1.0 - lambda) + omega * omega) + (1.0 - lambda));
}

// Log of sqrt-density x^((lambda-1)/2) exp(-omega/4 (x + 1/x)).
inline double gig_log_sqrt_density(double x, double lambda, double omega) {
  return 0.5 * (lambda - 1.0) * std::log(x) - 0.25 * omega * (x + 1.0 / x);
}

inline double rou_noshift(double lambda, double omega, Rng &rng) {
  const double t = 0.5 * (lambda - 1.0);
  const double s = 0.25 * omega;
  const double xm = gig_mode(lambda, omega);
  const double nc = t * std::log(xm) - s * (xm + 1.0 / xm);
  const double ym = ((lambda + 1.0) + std::sqrt((lambda + 1.0) * (lambda + 1.0) + omega * omega)) / omega;
  const double um = std::exp(0.5 * (lambda + 1.0) * std::log(ym) - s * (ym + 1.0 / ym) - nc);
  for (;;) {
    const double u = um * rng.uniform();
    const double v = rng.uniform();
    const double x = u / v;
    if (std::log(v) <= t * std::log(x) - s * (x + 1.0 / x) - nc) return x;
  }
}

/// Bounds (u_minus, u_plus) of (x - mode) * sqrt(f(x)/f(mode)) over x > 0,
/// found as the two real roots of the stationarity cubic via Cardano.
struct ShiftBounds {
  double mode, nc, u_minus, u_plus;
};

inline ShiftBounds rou_shift_bounds(double lambda, double omega) {
  const double t = 0.5 * (lambda - 1.0);
  const double s = 0.25 * omega;
  const double xm = gig_mode(lambda, omega);
  const double nc = t * std::log(xm) - s * (xm + 1.0 / xm);
  const double a = -(2.0 * (lambda + 1.0) / omega + xm);
  const double b = 2.0 * (lambda - 1.0) * xm / omega - 1.0;
  const double c = xm;
  const double p = b - a * a / 3.0;
  const double q = (2.0 * a * a * a) / 27.0 - (a * b) / 3.0 + c;
  const double fi = std::acos(-q / (2.0 * std::sqrt(-(p * p * p) / 27.0)));
  const double fak = 2.0 * std::sqrt(-p / 3.0);
  const double y1 = fak * std::cos(fi / 3.0) - a / 3.0;
  const double y2 = fak * std::cos(fi / 3.0 + 4.0 / 3.0 * std::numbers::pi) - a / 3.0;
  const double uplus = (y1 - xm) * std::exp(t * std::log(y1) - s * (y1 + 1.0 / y1) - nc);
  const double uminus = (y2 - xm) * std::exp(t * std::log(y2) - s * (y2 + 1.0 / y2) - nc);
  return {xm, nc, uminus, uplus};
}

inline double rou_shift(double lambda, double omega, Rng &rng) {
  const double t = 0.5 * (lambda - 1.0);
  const double s = 0.25 * omega;
  const ShiftBounds bd = rou_shift_bounds(lambda, omega);
  for (;;) {
    const double u = bd.u_minus + rng.uniform() * (bd.u_plus - bd.u_minus);
    const double v = rng.uniform();
    const double x = u / v + bd.mode;
    if (x <= 0.0) continue;
    if (std::log(v) <= t * std::log(x) - s * (x + 1.0 / x) - bd.nc) return x;
  }
}

// Rejection from a three-piece hat; valid for 0 <= lambda < 1 and small omega.
inline double rejection_small_omega(double lambda, double omega, Rng &rng) {
  const double xm = gig_mode(lambda, omega);
  const double x0 = omega / (1.0 - lambda);
  const double k0 = std::exp((lambda - 1.0) * std::log(xm) - 0.5 * omega * (xm + 1.0 / xm));
  double area[3];
  area[0] = k0 * x0;
  double k1, k2;
  if (x0 >= 2.0 / omega) {
    k1 = 0.0;
    area[1] = 0.0;
    k2 = std::pow(x0, lambda - 1.0);
    area[2] = k2 * 2.0 * std::exp(-omega * x0 / 2.0) / omega;
  } else {
    k1 = std::exp(-omega);
    area[1] = lambda == 0.0 ? k1 * (std::log(2.0) - 2.0 * std::log(omega))
                            : k1 / lambda * (std::pow(2.0 / omega, lambda) - std::pow(x0, lambda));
    k2 = std::pow(2.0 / omega, lambda - 1.0);
    area[2] = k2 * 2.0 * std::exp(-1.0) / omega;
  }
  const double total = area[0] + area[1] + area[2];
  const double tail_start = std::max(x0, 2.0 / omega);
  for (;;) {
    double v = total * rng.uniform();
    double x, hat;
    if (v <= area[0]) {
      x = x0 * v / area[0];
      hat = k0;
    } else if ((v -= area[0]) <= area[1]) {
      if (lambda == 0.0) {
        x = omega * std::exp(std::exp(omega) * v);
        hat = k1 / x;
      } else {
        x = std::pow(std::pow(x0, lambda) + lambda / k1 * v, 1.0 / lambda);
        hat = k1 * std::pow(x, lambda - 1.0);
      }
    } else {
      v -= area[1];
      x = -2.0 / omega * std::log(std::exp(-omega / 2.0 * tail_start) - omega / (2.0 * k2) * v);
      hat = k2 * std::exp(-omega / 2.0 * x);
    }
    const double u = rng.uniform() * hat;
    if (std::log(u) <= (lambda - 1.0) * std::log(x) - 0.5 * omega * (x + 1.0 / x)) return x;
  }
}

/// Draw from x^(lambda-1) exp(-omega/2 (x + 1/x)), lambda >= 0, omega > 0.
inline double standard_gig(double lambda, double omega, Rng &rng) {
  if (lambda > 2.0 || omega > 3.0) return rou_shift(lambda, omega, rng);
  if (lambda >= 1.0 - 2.25 * omega * omega || omega > 0.2) return rou_noshift(lambda, omega, rng);
  return rejection_small_omega(lambda, omega, rng);
}

} // namespace detail

inline double sample_gig(const GigParams &params, Rng &rng) {
  params.validate();
  const double order = params.order;
  if (params.b == 0.0) return rng.gamma(order, params.a / 2.0);
  if (params.a == 0.0) return (params.b / 2.0) / rng.gamma(-order, 1.0);

  const double lambda = std::abs(order);
  const double omega = std::sqrt(params.a * params.b);
  // a*b underflowed: the nonzero-order boundary density is the limit.
  if (!(omega > 0.0)) {
    if (order > 0.0) return rng.gamma(order, params.a / 2.0);
    if (order < 0.0) return (params.b / 2.0) / rng.gamma(-order, 1.0);
    throw NumericalError("GIG: a*b underflows at order 0");
  }
  const double alpha = std::sqrt(params.b / params.a);
  const double x = detail::standard_gig(lambda, omega, rng);
  return order < 0.0 ? alpha / x : alpha * x;
}

} // namespace bspcoa
