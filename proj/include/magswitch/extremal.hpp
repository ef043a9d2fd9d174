// Copyright 2026 the magswitch authors
// SPDX-License-Identifier: Apache-2.0
//
// The first-order optimality system for time-optimal switching.  The state
// is the pair (m, psi) on S^2 x S^2 with psi the normalized projected
// adjoint direction, plus log|phi| carried as a scalar quadrature for
// diagnostics:
//
//   mdot   = -alpha (Dm - (Dm.m) m) + m x Dm + U sqrt(1+alpha^2) psi
//   psidot =  alpha (Dpsi - (Dpsi.psi) psi) - U sqrt(1+alpha^2) m
//             - Dm x psi + D(m x psi) - (psi . D(m x psi)) psi
//             - ((m x psi) . Dm) m
//   dlog|phi|/dt = alpha (Dpsi.psi - Dm.m) + psi . D(m x psi)
//
// with the optimal field u = U/sqrt(1+alpha^2) (alpha psi - psi x m).
// Extremals start at m = e1 with psi(0) = (0, cos v, sin v) parametrized by
// a single angle v, and |phi(0)| = 1/(U sqrt(1+alpha^2)) so the Hamiltonian
// equals 1.

#pragma once

#include <cmath>
#include <vector>

#include "magswitch/dynamics.hpp"
#include "magswitch/errors.hpp"
#include "magswitch/params.hpp"
#include "magswitch/vec3.hpp"

namespace magswitch {

struct ExtremalState {
  Vec3 m;
  Vec3 psi;
  double log_phi = 0.0;
};

struct ExtremalDerivative {
  Vec3 dm;
  Vec3 dpsi;
  double dlog_phi = 0.0;
};

// Pointwise residuals of the first-order optimality conditions.
struct PMPDiagnostics {
  double hamiltonian_defect = 0.0;    // |H - 1|, H the constant of motion
  double transversality_defect = 0.0; // | |phi| (U^2 - Dm.u) - U/sqrt(1+a^2) |
  double phi_boundary_defect = 0.0;   // | U sqrt(1+a^2) |phi| - 1 |
};

ExtremalDerivative extremal_rhs(const ExtremalState& s, double U, const MaterialParams& p);

// The field realizing the extremal velocity; |u| = U and u.m = 0.
inline Vec3 optimal_control(const ExtremalState& s, double U, const MaterialParams& p) {
  return (s.psi * p.alpha - cross(s.psi, s.m)) * (U / sqrt1a2(p));
}

PMPDiagnostics pmp_diagnostics(const ExtremalState& s, double U, const MaterialParams& p);

// Extremal initial state for launch angle v: m = e1, psi = (0, cos v, sin v),
// |phi| = 1/(U sqrt(1+alpha^2)).
inline ExtremalState extremal_initial_state(double launch_angle, double U,
                                            const MaterialParams& p) {
  return {kE1, {0.0, std::cos(launch_angle), std::sin(launch_angle)},
          -std::log(U * sqrt1a2(p))};
}

// Fixed-step RK4 on (m, psi, log|phi|).  By default m and psi are
// renormalized after every step (pre-renormalization defect logged);
// pass renormalize = false for drift studies.  The stop event sees (t, m).
// The returned Trajectory carries psi in `costates`, the optimal control in
// `controls`, and the per-sample Hamiltonian defect in `ham_defect`.
Trajectory integrate_extremal(double launch_angle, double U, const MaterialParams& params,
                              double dt, double t_max, const StopEvent& stop = nullptr,
                              bool renormalize = true, int record_stride = 1);

// Scalar reduction for the rotationally symmetric case gamma2 = gamma3:
// the polar angle of m from +e1 obeys
//   vdot = -alpha (gamma2 - gamma1) sin v cos v + U sqrt(1+alpha^2).
// If the drive clears the barrier the angle reaches pi in finite time T;
// otherwise it stalls at the first zero of the rate.
struct ThetaReduction {
  bool reached = false;
  double switching_time = 0.0;  // valid when reached
  double stall_angle = 0.0;     // valid when !reached
  std::vector<double> times;
  std::vector<double> theta;
};

ThetaReduction theta_reduction(double U, const MaterialParams& params, double dt = 1e-4,
                               double t_max = 0.0);

// Consistency check of the transported normal direction Z = (psi x m)/|..|:
// re-integrates Z by its own projected equation alongside the stored
// trajectory and reports the worst deviation from psi x m, plus the largest
// |Zdot| encountered (bounded by (1+alpha)(gamma3-gamma1)).
struct ZDynamicsReport {
  double sup_deviation = 0.0;
  double max_rate = 0.0;
};

ZDynamicsReport z_dynamics_check(const Trajectory& traj, const MaterialParams& params);

// Distance of the trajectory from the plane spanned by e1 and the final
// swept direction: sup_t |m(t) . Z(T)|.  Requires the trajectory to have
// reached -e1 (stopped on target).
double planarity_measure(const Trajectory& traj);

}  // namespace magswitch
