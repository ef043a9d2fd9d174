// Copyright 2026 the magswitch authors
// SPDX-License-Identifier: Apache-2.0

#include "magswitch/thresholds.hpp"

#include <cmath>
#include <cstddef>

#include "magswitch/dynamics.hpp"

namespace magswitch {

namespace {

// Angular rate of the planar crossing; positive for every theta because
// 1 + eps - sin^2 2theta > 0.
double planar_rate(double theta, double eps, double k, double alpha) {
  const double s = std::sin(2.0 * theta);
  return k * (-alpha * s + std::sqrt(1.0 + eps + (alpha * alpha - 1.0) * s * s));
}

double planar_rk4_step(double theta, double dt, double eps, double k, double alpha) {
  const double k1 = planar_rate(theta, eps, k, alpha);
  const double k2 = planar_rate(theta + 0.5 * dt * k1, eps, k, alpha);
  const double k3 = planar_rate(theta + 0.5 * dt * k2, eps, k, alpha);
  const double k4 = planar_rate(theta + dt * k3, eps, k, alpha);
  return theta + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

StabilityMatrixData stability_matrix(const MaterialParams& params) {
  params.validate();
  if (!(params.g1 < params.g2)) {
    throw DomainError(
        "stability_matrix: requires gamma1 < gamma2 (with the first two factors "
        "equal the pole is only marginally attracting and the bound does not apply)");
  }
  StabilityMatrixData s;
  s.dgm = params.dgm();
  s.dgp = params.dgp();
  s.a11 = -params.alpha * s.dgm;
  s.a12 = -s.dgp;
  s.a21 = s.dgm;
  s.a22 = -params.alpha * s.dgp;
  s.trace = s.a11 + s.a22;
  s.det = s.a11 * s.a22 - s.a12 * s.a21;
  s.discriminant = s.trace * s.trace - 4.0 * s.det;
  if (s.discriminant >= 0.0) {
    s.lambda_plus = {0.5 * (s.trace + std::sqrt(s.discriminant)), 0.0};
  } else {
    s.lambda_plus = {0.5 * s.trace, 0.5 * std::sqrt(-s.discriminant)};
  }
  // ||A||_2^2 as the largest eigenvalue of A^T A via its characteristic
  // radical, computed from the actual entries.
  const double b11 = s.a11 * s.a11 + s.a21 * s.a21;
  const double b12 = s.a11 * s.a12 + s.a21 * s.a22;
  const double b22 = s.a12 * s.a12 + s.a22 * s.a22;
  const double tr2 = b11 + b22;
  const double det2 = b11 * b22 - b12 * b12;
  s.spectral_norm = std::sqrt(0.5 * (tr2 + std::sqrt(std::max(0.0, tr2 * tr2 - 4.0 * det2))));
  return s;
}

FixedPointThreshold fixed_point_threshold(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw DomainError("fixed_point_threshold: both coefficients must be positive");
  }
  FixedPointThreshold r;
  r.x1 = std::min(1.0, std::sqrt(a / (3.0 * b)));
  r.max_c = a * r.x1 - b * r.x1 * r.x1 * r.x1;
  return r;
}

double u_stab(const MaterialParams& params) {
  const StabilityMatrixData s = stability_matrix(params);
  const double denom = s.spectral_norm * (1.0 + std::abs(params.alpha));
  // Real spectrum: the slow eigenvalue governs the attraction; complex
  // spectrum: the shared real part -trace/2 does.
  const double a = (s.discriminant > 0.0) ? std::norm(s.lambda_plus) / (3.0 * denom)
                                          : s.trace * s.trace / (12.0 * denom);
  return fixed_point_threshold(a, s.dgp).max_c;
}

double ucrit_symmetric(const MaterialParams& params) {
  params.validate();
  if (std::abs(params.g2 - params.g3) > 1e-12) {
    throw DomainError("ucrit_symmetric: requires gamma2 == gamma3 (within 1e-12)");
  }
  return params.alpha * params.dgm() / (2.0 * sqrt1a2(params));
}

double minimal_time_symmetric(double U, const MaterialParams& params) {
  const double uc = ucrit_symmetric(params);
  if (!(U > uc)) {
    throw DomainError(
        "minimal_time_symmetric: intensity at or below the critical value, "
        "no switching trajectory exists");
  }
  return M_PI / (sqrt1a2(params) * std::sqrt(U * U - uc * uc));
}

double minimal_time_large_intensity(double U, const MaterialParams& params) {
  params.validate();
  if (!(U > 0.0)) throw DomainError("minimal_time_large_intensity: U must be positive");
  return M_PI / (sqrt1a2(params) * U);
}

double minimal_time_near_critical(double U, const MaterialParams& params) {
  const double uc = ucrit_symmetric(params);
  if (!(U > uc)) {
    throw DomainError("minimal_time_near_critical: requires U above the critical value");
  }
  return M_PI / (sqrt1a2(params) * std::sqrt(2.0 * uc * (U - uc)));
}

PlanarPath planar_trajectory(double epsilon, const MaterialParams& params) {
  params.validate();
  if (!(epsilon > 0.0)) throw DomainError("planar_trajectory: epsilon must be positive");
  if (!(params.g1 < params.g2)) {
    throw DomainError(
        "planar_trajectory: requires gamma1 < gamma2 (with equal first factors a "
        "great circle through the poles crossed at constant speed serves instead)");
  }
  const double alpha = params.alpha;
  const double k = 0.5 * params.dgm();

  PlanarPath path;
  path.epsilon = epsilon;
  path.u_plan = k;

  // Step so the launch advances ~1e-3 rad per step; the crossing time is
  // bounded by pi (sqrt(eps + alpha^2) + alpha) / (k eps), which caps the
  // step count.
  const double f0 = planar_rate(0.0, epsilon, k, alpha);
  const double dt = 1e-3 / f0;
  const double t_bound = M_PI * (std::sqrt(epsilon + alpha * alpha) + alpha) / (k * epsilon);
  const std::size_t max_steps = static_cast<std::size_t>(2.0 * t_bound / dt) + 16;

  double theta = 0.0;
  path.times.push_back(0.0);
  path.theta.push_back(0.0);
  path.states.push_back(kE1);
  bool crossed = false;
  for (std::size_t step = 1; step <= max_steps; ++step) {
    const double theta_next = planar_rk4_step(theta, dt, epsilon, k, alpha);
    const double t_next = dt * static_cast<double>(step);
    path.times.push_back(t_next);
    path.theta.push_back(theta_next);
    path.states.push_back({std::cos(theta_next), std::sin(theta_next), 0.0});
    if (theta_next >= M_PI) {
      path.duration = t_next - dt + dt * (M_PI - theta) / (theta_next - theta);
      crossed = true;
      break;
    }
    theta = theta_next;
  }
  if (!crossed) {
    throw NumericalError("planar_trajectory: crossing not reached within twice the analytic time bound");
  }

  path.sup_admissibility = lambda_functional(path.times, path.states, params);
  const double bound = k * k * (1.0 + epsilon);
  if (path.sup_admissibility > bound * (1.0 + 1e-6)) {
    throw NumericalError("planar_trajectory: measured admissibility exceeds the design bound");
  }
  return path;
}

ThresholdReport threshold_report(const MaterialParams& params) {
  ThresholdReport report;
  report.matrix = stability_matrix(params);
  report.u_stab = u_stab(params);
  report.u_plan = u_plan(params);
  if (std::abs(params.g2 - params.g3) <= 1e-12) {
    report.u_crit_closed_form = ucrit_symmetric(params);
    report.minimal_time = [params](double U) { return minimal_time_symmetric(U, params); };
  }
  return report;
}

}  // namespace magswitch
