// Copyright 2026 the magswitch authors
// SPDX-License-Identifier: Apache-2.0

#include "magswitch/demag.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "magswitch/elliptic.hpp"
#include "magswitch/errors.hpp"
#include "magswitch/quadrature.hpp"

namespace magswitch {

namespace {

// Quadrature for one factor on normalized axes (max axis scaled to 1, which
// leaves gamma_i unchanged and keeps the integrand scale-free).  The
// substitution s = x/(1-x) maps [0, inf) to [0, 1); the transformed
// integrand vanishes like sqrt(1-x) at the right endpoint, and Gauss-Kronrod
// nodes are interior, so the limit point is never evaluated.
double factor_by_quadrature(double a1, double a2, double a3, double ai, double* achieved) {
  const double pref = 0.5 * a1 * a2 * a3;
  const auto integrand = [=](double x) {
    if (x >= 1.0) return 0.0;
    const double om = 1.0 - x;
    const double s = x / om;
    const double q1 = a1 * a1 + s;
    const double q2 = a2 * a2 + s;
    const double q3 = a3 * a3 + s;
    return pref / ((ai * ai + s) * std::sqrt(q1 * q2 * q3) * om * om);
  };
  QuadResult r = integrate_adaptive_estimate(integrand, 0.0, 1.0, 1e-12, 4000);
  *achieved = r.error_estimate;
  return r.value;
}

// gamma_1 for a prolate spheroid with long axis a and short axes c (a > c).
double prolate_long_factor(double a, double c) {
  const double e = std::sqrt(a * a - c * c);
  // acoth(a/e) = atanh(e/a)
  return (c * c / (e * e * e)) * (a * std::atanh(e / a) - e);
}

// gamma_3 for an oblate spheroid with equal long axes a and short axis c (a > c).
double oblate_short_factor(double a, double c) {
  const double g = std::sqrt(a * a - c * c);
  return (a * a / (g * g * g)) * (g - c * std::atan(g / c));
}

// Factors for a strictly triaxial ellipsoid with a > b > c, returned in
// (a, b, c) axis order.
std::array<double, 3> triaxial_factors(double a, double b, double c) {
  const double s = std::sqrt(a * a - c * c);
  const double phi = std::asin(s / a);  // asin(sqrt(1 - c^2/a^2))
  const double p = (a * a - b * b) / (a * a - c * c);
  const double F = ellint_F(phi, p);
  const double E = ellint_E_carlson(phi, p);
  const double abc = a * b * c;
  const double ga = (abc / ((a * a - b * b) * s)) * (F - E);
  const double gc = b * b / (b * b - c * c) - (abc / ((b * b - c * c) * s)) * E;
  const double gb = 1.0 - ga - gc;
  return {ga, gb, gc};
}

}  // namespace

DemagTensor demag_quadrature(const EllipsoidGeometry& geom) {
  geom.validate();
  const double amax = std::max({geom.a1, geom.a2, geom.a3});
  const double a1 = geom.a1 / amax;
  const double a2 = geom.a2 / amax;
  const double a3 = geom.a3 / amax;
  DemagTensor out;
  double worst = 0.0;
  double e1, e2, e3;
  out.g1 = factor_by_quadrature(a1, a2, a3, a1, &e1);
  out.g2 = factor_by_quadrature(a1, a2, a3, a2, &e2);
  out.g3 = factor_by_quadrature(a1, a2, a3, a3, &e3);
  worst = std::max({e1, e2, e3});
  if (worst > 1e-10) {
    throw NumericalError("demag_quadrature: achieved error estimate " + std::to_string(worst) +
                         " exceeds 1e-10");
  }
  return out;
}

DemagTensor demag_closed_form(const EllipsoidGeometry& geom) {
  geom.validate();
  // Sort axes descending, remembering which input axis fills each slot.
  std::array<double, 3> ax{geom.a1, geom.a2, geom.a3};
  std::array<int, 3> idx{0, 1, 2};
  if (ax[idx[0]] < ax[idx[1]]) std::swap(idx[0], idx[1]);
  if (ax[idx[1]] < ax[idx[2]]) std::swap(idx[1], idx[2]);
  if (ax[idx[0]] < ax[idx[1]]) std::swap(idx[0], idx[1]);
  const double a = ax[idx[0]];
  const double b = ax[idx[1]];
  const double c = ax[idx[2]];

  constexpr double kDegenerate = 1e-8;
  const bool ab_equal = (a - b) <= kDegenerate * a;
  const bool bc_equal = (b - c) <= kDegenerate * b;

  std::array<double, 3> sorted_factors{};  // in (a, b, c) slot order
  if (ab_equal && bc_equal) {
    sorted_factors = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  } else if (bc_equal) {
    const double ga = prolate_long_factor(a, c);
    const double gt = 0.5 * (1.0 - ga);
    sorted_factors = {ga, gt, gt};
  } else if (ab_equal) {
    const double gc = oblate_short_factor(a, c);
    const double gt = 0.5 * (1.0 - gc);
    sorted_factors = {gt, gt, gc};
  } else {
    sorted_factors = triaxial_factors(a, b, c);
  }

  std::array<double, 3> out{};
  for (int k = 0; k < 3; ++k) out[idx[k]] = sorted_factors[k];
  return {out[0], out[1], out[2]};
}

}  // namespace magswitch
