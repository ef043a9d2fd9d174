// Copyright 2026 the magswitch authors
// SPDX-License-Identifier: Apache-2.0
//
// Analytic intensity thresholds for switching the magnetization from +e1
// to -e1, and the closed-form constructions behind them:
//
//   * stability_matrix / u_stab    -- linearization at the stable pole and
//                                     the derived intensity below which no
//                                     admissible control can switch,
//   * ucrit_symmetric              -- exact critical intensity when the two
//                                     hard-axis factors coincide,
//   * minimal_time_symmetric       -- exact minimal switching time above it,
//   * planar_trajectory / u_plan   -- an explicit in-plane crossing whose
//                                     measured admissibility witnesses the
//                                     upper bound (gamma2 - gamma1) / 2.
//
// All quantities depend on the demagnetizing factors only through the
// differences gamma2 - gamma1 and gamma3 - gamma1.

#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "magswitch/errors.hpp"
#include "magswitch/params.hpp"
#include "magswitch/vec3.hpp"

namespace magswitch {

// Tangent-plane linearization A of the uncontrolled flow at the pole +e1,
//   A = [[-alpha*dgm, -dgp], [dgm, -alpha*dgp]],  dgm = g2-g1, dgp = g3-g1,
// together with the scalar data the intensity bound is built from.  The
// spectral norm is evaluated through the largest-eigenvalue radical of the
// actual A^T A (which collapses to sqrt(1+alpha^2)*dgp because the columns
// of A are orthogonal).
struct StabilityMatrixData {
  double a11 = 0.0, a12 = 0.0;
  double a21 = 0.0, a22 = 0.0;
  double trace = 0.0;
  double det = 0.0;
  double discriminant = 0.0;           // trace^2 - 4 det
  std::complex<double> lambda_plus;    // eigenvalue with the larger real part
  double spectral_norm = 0.0;          // ||A||_2
  double dgm = 0.0;                    // gamma2 - gamma1
  double dgp = 0.0;                    // gamma3 - gamma1
};

// Requires gamma1 < gamma2 (otherwise the pole is not linearly attracting in
// every tangent direction and the bound below does not apply); throws
// DomainError when the pair degenerates.
StabilityMatrixData stability_matrix(const MaterialParams& params);

// Largest constant term c for which x -> (b x^3 + c) / a has a fixed point
// in (0, 1]: x1 = min{1, sqrt(a / 3b)} and max_c = a x1 - b x1^3.  The
// maximum satisfies max_c >= (2/3) a x1.  Throws DomainError unless a, b > 0.
struct FixedPointThreshold {
  double x1 = 0.0;
  double max_c = 0.0;
};
FixedPointThreshold fixed_point_threshold(double a, double b);

// Intensity below which the pole +e1 confines every trajectory to the
// half-space m1 >= 0: no bounded control of this intensity can switch.
// Branches on the sign of the discriminant of A (real vs complex spectrum);
// the result is positive, depends only on (dgm, dgp, alpha), and is
// 1-homogeneous in the factor differences.  Requires gamma1 < gamma2.
double u_stab(const MaterialParams& params);

// Exact critical switching intensity when gamma2 == gamma3 (within 1e-12):
//   alpha * (gamma2 - gamma1) / (2 sqrt(1 + alpha^2)).
// Throws DomainError for asymmetric factors.
double ucrit_symmetric(const MaterialParams& params);

// Exact minimal switching time pi / (sqrt(1+alpha^2) sqrt(U^2 - U_crit^2))
// for gamma2 == gamma3 and U > U_crit; throws DomainError at or below the
// critical intensity (no admissible switching trajectory exists there).
double minimal_time_symmetric(double U, const MaterialParams& params);

// Leading behaviours of minimal_time_symmetric, exposed for documentation
// and testing: T ~ pi / (sqrt(1+alpha^2) U) as U -> infinity, and
// T ~ pi / (sqrt(1+alpha^2) sqrt(2 U_crit (U - U_crit))) as U -> U_crit+.
double minimal_time_large_intensity(double U, const MaterialParams& params);
double minimal_time_near_critical(double U, const MaterialParams& params);

// Upper switching threshold witnessed by the planar crossing below.
inline double u_plan(const MaterialParams& params) { return 0.5 * params.dgm(); }

// In-plane crossing m(theta) = (cos theta, sin theta, 0) from +e1 to -e1
// driven by the angular rate
//   f_eps(theta) = ((g2-g1)/2) (-alpha sin 2theta
//                               + sqrt(1 + eps + (alpha^2 - 1) sin^2 2theta)),
// which keeps the admissibility integrand at most (1+eps) u_plan^2 along the
// whole path.  `duration` is the crossing time of theta = pi (interpolated
// within the final step); the recorded samples form a uniform grid whose
// last entry is the first one at or past the crossing.
struct PlanarPath {
  double epsilon = 0.0;
  double u_plan = 0.0;               // (gamma2 - gamma1) / 2
  double duration = 0.0;             // time to reach theta = pi
  double sup_admissibility = 0.0;    // measured sup of the integrand
  std::vector<double> times;
  std::vector<double> theta;
  std::vector<Vec3> states;
};

// Integrates the angular rate with a fixed-step fourth-order scheme, the
// step chosen so the launch advances about 1e-3 rad per step; measures the
// admissibility supremum from the sampled states.  Throws DomainError for
// eps <= 0 or gamma1 == gamma2 (with equal first factors a circle through
// the poles crossed at constant speed is the natural construction instead),
// NumericalError if the supremum exceeds (1+eps) u_plan^2 beyond rounding.
PlanarPath planar_trajectory(double epsilon, const MaterialParams& params);

// Aggregate of the analytic thresholds for one material; the closed-form
// critical intensity and minimal-time map are present exactly when the
// hard-axis factors coincide.  Whenever both are defined,
//   u_stab <= u_crit_closed_form <= u_plan.
struct ThresholdReport {
  double u_stab = 0.0;
  double u_plan = 0.0;
  std::optional<double> u_crit_closed_form;
  std::function<double(double)> minimal_time;  // set iff u_crit_closed_form
  StabilityMatrixData matrix;
};

// Requires gamma1 < gamma2 (the lower bound is built from the linearization).
ThresholdReport threshold_report(const MaterialParams& params);

}  // namespace magswitch
