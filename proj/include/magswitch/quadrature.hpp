// Copyright 2026 the magswitch authors
// SPDX-License-Identifier: Apache-2.0
//
// Globally adaptive Gauss-Kronrod (G7,K15) quadrature on a finite interval.
// The worst interval (largest error estimate) is bisected until the summed
// error estimate meets the absolute tolerance.  All nodes are interior, so
// integrable endpoint singularities (the demag substitution leaves a sqrt
// cusp at x = 1) never get evaluated at the singular point itself.

#pragma once

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "magswitch/errors.hpp"

namespace magswitch {

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int intervals = 0;
  bool converged = false;
};

namespace detail {

// Kronrod-15 abscissae on [-1, 1] (positive half) and weights, plus the
// embedded Gauss-7 weights.  Standard values, e.g. QUADPACK dqk15.
inline constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

template <class F>
inline void gk15(const F& f, double a, double b, double* value, double* err) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double result_g = fc * kWg[3];
  double result_k = fc * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    result_k += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) {  // j = 1, 3, 5 map to the Gauss-7 abscissae
      result_g += kWg[j / 2] * (f1 + f2);
    }
  }
  *value = result_k * h;
  *err = std::abs((result_k - result_g) * h);
}

struct Segment {
  double a, b, value, err;
  bool operator<(const Segment& o) const { return err < o.err; }
};

}  // namespace detail

// Integrate f over [a, b] toward absolute tolerance abs_tol.  Never throws;
// the caller inspects `converged` / `error_estimate` and applies its own
// acceptance threshold.
template <class F>
QuadResult integrate_adaptive_estimate(const F& f, double a, double b, double abs_tol,
                                       int max_intervals = 20000) {
  std::priority_queue<detail::Segment> queue;
  detail::Segment s{a, b, 0.0, 0.0};
  detail::gk15(f, a, b, &s.value, &s.err);
  queue.push(s);
  double total_value = s.value;
  double total_err = s.err;
  int n = 1;
  while (total_err > abs_tol && n < max_intervals) {
    const detail::Segment worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    detail::Segment left{worst.a, mid, 0.0, 0.0};
    detail::Segment right{mid, worst.b, 0.0, 0.0};
    detail::gk15(f, left.a, left.b, &left.value, &left.err);
    detail::gk15(f, right.a, right.b, &right.value, &right.err);
    total_value += left.value + right.value - worst.value;
    total_err += left.err + right.err - worst.err;
    queue.push(left);
    queue.push(right);
    ++n;
    // Splitting cannot push the estimate below the noise floor of the sum;
    // stop once the error estimate stagnates at rounding level.
    if (total_err <= 1e-16 * std::abs(total_value)) break;
  }
  const bool ok = total_err <= abs_tol || total_err <= 1e-16 * std::abs(total_value);
  return {total_value, total_err, n, ok};
}

// Integrate f over [a, b] to absolute tolerance abs_tol.  Throws
// NumericalError (with the achieved estimate in the message) if the interval
// budget is exhausted before convergence.
template <class F>
QuadResult integrate_adaptive(const F& f, double a, double b, double abs_tol,
                              int max_intervals = 20000) {
  QuadResult r = integrate_adaptive_estimate(f, a, b, abs_tol, max_intervals);
  if (!r.converged) {
    throw NumericalError("adaptive quadrature did not converge: achieved error estimate " +
                         std::to_string(r.error_estimate) + " > tolerance " +
                         std::to_string(abs_tol));
  }
  return r;
}

}  // namespace magswitch
