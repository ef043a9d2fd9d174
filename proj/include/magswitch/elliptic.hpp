// Copyright 2026 the magswitch authors
// SPDX-License-Identifier: Apache-2.0
//
// Incomplete elliptic integrals.  The exposed E(x, p) follows the
// convention E(x, p) = \int_0^x sqrt(1 - p sin^2 t) dt with p the
// *parameter* (p = k^2), and is evaluated by adaptive quadrature.  The
// closed-form demag branches use the Carlson symmetric forms R_F / R_D,
// which are cross-checked against the quadrature in the tests.

#pragma once

#include <cmath>

#include "magswitch/errors.hpp"
#include "magswitch/quadrature.hpp"

namespace magswitch {

// Carlson's R_F(x, y, z) by the standard duplication algorithm.
inline double carlson_rf(double x, double y, double z) {
  constexpr double kErrTol = 0.0008;  // relative error ~ kErrTol^6 < 3e-19
  double xt = x, yt = y, zt = z;
  double mu = 0.0, dx = 0.0, dy = 0.0, dz = 0.0;
  do {
    const double sx = std::sqrt(xt);
    const double sy = std::sqrt(yt);
    const double sz = std::sqrt(zt);
    const double lam = sx * (sy + sz) + sy * sz;
    xt = 0.25 * (xt + lam);
    yt = 0.25 * (yt + lam);
    zt = 0.25 * (zt + lam);
    mu = (xt + yt + zt) / 3.0;
    dx = (mu - xt) / mu;
    dy = (mu - yt) / mu;
    dz = (mu - zt) / mu;
  } while (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) > kErrTol);
  const double e2 = dx * dy - dz * dz;
  const double e3 = dx * dy * dz;
  return (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / std::sqrt(mu);
}

// Carlson's R_D(x, y, z) by the standard duplication algorithm.
inline double carlson_rd(double x, double y, double z) {
  constexpr double kErrTol = 0.0005;
  double xt = x, yt = y, zt = z;
  double sum = 0.0, fac = 1.0;
  double mu = 0.0, dx = 0.0, dy = 0.0, dz = 0.0;
  do {
    const double sx = std::sqrt(xt);
    const double sy = std::sqrt(yt);
    const double sz = std::sqrt(zt);
    const double lam = sx * (sy + sz) + sy * sz;
    sum += fac / (sz * (zt + lam));
    fac *= 0.25;
    xt = 0.25 * (xt + lam);
    yt = 0.25 * (yt + lam);
    zt = 0.25 * (zt + lam);
    mu = 0.2 * (xt + yt + 3.0 * zt);
    dx = (mu - xt) / mu;
    dy = (mu - yt) / mu;
    dz = (mu - zt) / mu;
  } while (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) > kErrTol);
  const double ea = dx * dy;
  const double eb = dz * dz;
  const double ec = ea - eb;
  const double ed = ea - 6.0 * eb;
  const double ee = ed + ec + ec;
  return 3.0 * sum +
         fac *
             (1.0 + ed * (-3.0 / 14.0 + 9.0 / 88.0 * ed - 4.5 / 26.0 * dz * ee) +
              dz * (1.0 / 6.0 * ee + dz * (-9.0 / 22.0 * ec + 3.0 / 26.0 * dz * ea))) /
             (mu * std::sqrt(mu));
}

// Incomplete elliptic integral of the first kind,
// F(phi, p) = \int_0^phi dt / sqrt(1 - p sin^2 t), for phi in [0, pi/2].
inline double ellint_F(double phi, double p) {
  const double s = std::sin(phi);
  const double c = std::cos(phi);
  return s * carlson_rf(c * c, 1.0 - p * s * s, 1.0);
}

// Incomplete elliptic integral of the second kind via Carlson forms,
// E(phi, p) = \int_0^phi sqrt(1 - p sin^2 t) dt, for phi in [0, pi/2].
inline double ellint_E_carlson(double phi, double p) {
  const double s = std::sin(phi);
  const double c = std::cos(phi);
  const double s3 = s * s * s;
  const double q = 1.0 - p * s * s;
  return s * carlson_rf(c * c, q, 1.0) - (p / 3.0) * s3 * carlson_rd(c * c, q, 1.0);
}

// The exposed operation: E(x, p) by adaptive quadrature to 1e-12 relative
// error.  Domain: p strictly inside (0, 1).
inline double incomplete_elliptic_E(double x, double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("incomplete_elliptic_E: parameter p must lie in (0,1)");
  }
  if (x == 0.0) return 0.0;
  const auto integrand = [p](double t) {
    const double st = std::sin(t);
    return std::sqrt(1.0 - p * st * st);
  };
  // |integrand| <= 1, so an absolute tolerance of 1e-13·|x| bounds the
  // relative error of the integral (whose value is >= x·sqrt(1-p) > 0).
  const double tol = 1e-13 * std::max(std::abs(x), 1.0);
  QuadResult r = x >= 0.0 ? integrate_adaptive(integrand, 0.0, x, tol)
                          : integrate_adaptive(integrand, x, 0.0, tol);
  return x >= 0.0 ? r.value : -r.value;
}

}  // namespace magswitch
