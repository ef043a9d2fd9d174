// Copyright 2026 the magswitch authors
// SPDX-License-Identifier: Apache-2.0
//
// Controlled Landau-Lifshitz dynamics on the unit sphere:
//
//   mdot = alpha (h0 - (h0.m) m) - m x h0,     h0(m) = -D m + u,
//
// with D = diag(gamma) the demagnetizing tensor and u the applied field.
// This module provides the right-hand side, a fixed-step RK4 integrator with
// post-step renormalization and event stopping, flatness-based control
// reconstruction from a stored path, the admissibility functional (the
// supremum of the pointwise squared field demand along a path), and the
// norm-U feedback law that steers toward -e1.

#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "magswitch/errors.hpp"
#include "magswitch/params.hpp"
#include "magswitch/vec3.hpp"

namespace magswitch {

// A sampled solution.  `costates` and `ham_defect` are filled only by the
// extremal-flow integrator; plain dynamics runs leave them empty.
struct Trajectory {
  std::vector<double> times;
  std::vector<Vec3> states;
  std::vector<Vec3> controls;
  std::vector<double> norm_defect;  // | |m_raw| - 1 | of the producing step
  std::vector<Vec3> costates;
  std::vector<double> log_phi;
  std::vector<double> ham_defect;
  bool stopped = false;      // stop event fired before t_max
  double event_time = -1.0;  // interpolated firing time, valid when stopped
};

// Control law u(t, m) and scalar stop event g(t, m); the event fires at the
// first sign change of g to <= 0.
using ControlLaw = std::function<Vec3(double, const Vec3&)>;
using StopEvent = std::function<double(double, const Vec3&)>;

// Right-hand side in the damping/precession split form.
inline Vec3 ll_rhs(const Vec3& m, const Vec3& u, const MaterialParams& p) {
  const Vec3 h0 = u - apply_demag(p, m);
  return (h0 - m * dot(h0, m)) * p.alpha - cross(m, h0);
}

// Same field written with nested cross products; used to cross-check the
// expanded form (the two agree by the Lagrange triple-product identity).
inline Vec3 ll_rhs_cross_form(const Vec3& m, const Vec3& u, const MaterialParams& p) {
  const Vec3 h0 = u - apply_demag(p, m);
  return cross(m, h0) * -1.0 - cross(m, cross(m, h0)) * p.alpha;
}

// Squared field intensity needed at one instant to realize velocity mdot at
// state m with a field orthogonal to m (the minimizing gauge).  A path is
// U-admissible exactly when the supremum of this quantity stays <= U^2.
inline double admissibility_integrand(const Vec3& m, const Vec3& mdot, const MaterialParams& p) {
  const double speed = mdot.norm();
  const Vec3 e = mdot / speed;
  const Vec3 dm = apply_demag(p, m);
  const double inv = 1.0 / (1.0 + p.alpha * p.alpha);
  const double c1 = dot(e, cross(dm, m)) + speed * inv;
  const double c2 = dot(e, dm) + p.alpha * speed * inv;
  return c1 * c1 + c2 * c2;
}

// Feedback law of constant intensity U steering the state toward -e1.
// Undefined at the poles +-e1.
inline Vec3 feedback_control(const Vec3& m, double U, const MaterialParams& p) {
  const double c1 = m.x;
  if (std::abs(c1) >= 1.0 - 1e-12) {
    throw DomainError("feedback_control: state within 1e-12 of the poles +-e1");
  }
  const Vec3 v = (kE1 * -1.0 + m * c1) * p.alpha + cross(kE1, m);
  return v * (U / (sqrt1a2(p) * std::sqrt(1.0 - c1 * c1)));
}

// Time step resolving the fastest rotation rate for field intensity U.
inline double default_time_step(double U, const MaterialParams& p) {
  return 1e-3 / std::max({U, p.g3 - p.g1, 1.0});
}

// Classical fixed-step RK4 with renormalization to the unit sphere after
// every step.  Stops at t_max or when `stop` first reaches <= 0; the event
// time is located by linear interpolation between the bracketing steps and
// the final state by a partial step of that length.  `record_stride` thins
// the stored samples (the initial and final samples are always kept).
// Throws NumericalError if a single step's norm defect exceeds 1e-3.
Trajectory integrate(const Vec3& m0, const ControlLaw& control, const MaterialParams& params,
                     double dt, double t_max, const StopEvent& stop = nullptr,
                     int record_stride = 1);

// Flatness inversion: the control that drives the stored path, sampled on
// its (uniform) time grid.  Derivatives are fourth-order finite differences.
// `lambda` is the free gauge component along m; pass nullptr for the
// orthogonal-gauge control with u.m = 0.
std::vector<Vec3> reconstruct_control(const std::vector<double>& times,
                                      const std::vector<Vec3>& states,
                                      const std::function<double(double)>& lambda,
                                      const MaterialParams& params);

// Supremum of admissibility_integrand over the sample grid, with derivatives
// by fourth-order finite differences.  Interior stagnation (|mdot| < 1e-12)
// raises NumericalError naming the sample; stagnant endpoints are skipped
// (paths legitimately come to rest at equilibria).
double lambda_functional(const std::vector<double>& times, const std::vector<Vec3>& states,
                         const MaterialParams& params);

}  // namespace magswitch
