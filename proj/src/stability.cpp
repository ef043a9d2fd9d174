// Copyright 2026 the magswitch authors
// SPDX-License-Identifier: Apache-2.0

#include "magswitch/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "magswitch/dynamics.hpp"
#include "magswitch/errors.hpp"

namespace magswitch {

namespace {

constexpr double kZeroTol = 1e-12;  // real part treated as exactly zero

Vec3 axis_vector(int axis) { return axis == 1 ? kE1 : (axis == 2 ? kE2 : kE3); }

EquilibriumReport make_report(int axis, int sign, const MaterialParams& p) {
  const Vec3 g = p.gamma();
  const int i = axis - 1, j = (i + 1) % 3, k = (i + 2) % 3;
  const double dij = g[i] - g[j];
  const double dik = g[i] - g[k];

  EquilibriumReport r;
  r.axis = axis;
  r.sign = sign;
  r.point = axis_vector(axis) * static_cast<double>(sign);
  r.j11 = p.alpha * dij;
  r.j12 = sign * dik;
  r.j21 = -sign * dij;
  r.j22 = p.alpha * dik;
  r.trace = r.j11 + r.j22;
  r.det = r.j11 * r.j22 - r.j12 * r.j21;

  const double disc = r.trace * r.trace - 4.0 * r.det;
  if (disc >= 0.0) {
    const double root = std::sqrt(disc);
    r.eig1 = {0.5 * (r.trace + root), 0.0};
    r.eig2 = {0.5 * (r.trace - root), 0.0};
  } else {
    const double imag = 0.5 * std::sqrt(-disc);
    r.eig1 = {0.5 * r.trace, imag};
    r.eig2 = {0.5 * r.trace, -imag};
  }

  const double max_re = std::max(r.eig1.real(), r.eig2.real());
  if (max_re > kZeroTol) {
    r.classification = EquilibriumClass::kLinearlyUnstable;
  } else if (max_re < -kZeroTol) {
    r.classification = EquilibriumClass::kAsymptoticallyStable;
  } else {
    r.classification = EquilibriumClass::kMarginal;
  }
  return r;
}

// Unit eigendirection of the 2x2 block for a real eigenvalue, from the
// better-conditioned of the two defining rows.
void real_eigendirection(const EquilibriumReport& r, double lambda, double* v1, double* v2) {
  const double a1 = r.j12, b1 = lambda - r.j11;
  const double a2 = lambda - r.j22, b2 = r.j21;
  double x, y;
  if (a1 * a1 + b1 * b1 >= a2 * a2 + b2 * b2) {
    x = a1;
    y = b1;
  } else {
    x = a2;
    y = b2;
  }
  const double n = std::sqrt(x * x + y * y);
  if (n == 0.0) {  // J proportional to identity: every direction works
    x = 1.0;
    y = 0.0;
  } else {
    x /= n;
    y /= n;
  }
  *v1 = x;
  *v2 = y;
}

}  // namespace

const char* to_string(EquilibriumClass c) {
  switch (c) {
    case EquilibriumClass::kAsymptoticallyStable:
      return "asymptotically stable";
    case EquilibriumClass::kLinearlyUnstable:
      return "linearly unstable";
    default:
      return "marginal";
  }
}

std::vector<EquilibriumReport> classify_equilibria(const MaterialParams& params) {
  params.validate();
  std::vector<EquilibriumReport> out;
  out.reserve(6);
  for (int axis = 1; axis <= 3; ++axis) {
    out.push_back(make_report(axis, +1, params));
    out.push_back(make_report(axis, -1, params));
  }
  return out;
}

SimulationConfirmation verify_by_simulation(const EquilibriumReport& report,
                                            const MaterialParams& params,
                                            double perturbation) {
  params.validate();
  if (!(perturbation > 0.0) || perturbation > 1e-2) {
    throw DomainError("verify_by_simulation: perturbation must lie in (0, 1e-2]");
  }

  SimulationConfirmation out;
  if (report.classification == EquilibriumClass::kMarginal) {
    out.skipped = true;
    return out;
  }

  // Smallest positive factor gap sets the slowest linear timescale.
  double min_gap = std::numeric_limits<double>::infinity();
  for (double gap : {params.g2 - params.g1, params.g3 - params.g2, params.g3 - params.g1}) {
    if (gap > 0.0) min_gap = std::min(min_gap, gap);
  }
  // A non-marginal classification requires at least one positive gap.
  out.horizon = 50.0 / (params.alpha * min_gap);

  const double dt = default_time_step(0.0, params);
  const int i = report.axis - 1;
  const Vec3 ej = axis_vector(1 + (i + 1) % 3);
  const Vec3 ek = axis_vector(1 + (i + 2) % 3);
  const ControlLaw zero = [](double, const Vec3&) { return Vec3{0.0, 0.0, 0.0}; };
  const std::size_t stride = 64;

  if (report.classification == EquilibriumClass::kAsymptoticallyStable) {
    const double threshold = perturbation / 10.0;
    const Vec3 point = report.point;
    const StopEvent settled = [point, threshold](double, const Vec3& m) {
      return (m - point).norm() - threshold;
    };
    out.confirmed = true;
    out.extreme_distance = 0.0;
    for (const Vec3& dir : {ej, ek}) {
      const Vec3 m0 = normalized(point + dir * perturbation);
      const Trajectory tr = integrate(m0, zero, params, dt, out.horizon, settled, stride);
      if (!tr.stopped) {
        out.confirmed = false;
        double closest = std::numeric_limits<double>::infinity();
        for (const Vec3& m : tr.states) closest = std::min(closest, (m - point).norm());
        out.extreme_distance = std::max(out.extreme_distance, closest);
        out.detection_time = out.horizon;
        continue;
      }
      out.detection_time = std::max(out.detection_time, tr.event_time);
      out.extreme_distance = std::max(out.extreme_distance, threshold);
    }
    return out;
  }

  // Unstable: seed along the unstable eigendirection when it is real; a
  // complex unstable pair repels every tangent direction.
  double v1 = 1.0, v2 = 0.0;
  const double disc = report.trace * report.trace - 4.0 * report.det;
  if (disc >= 0.0) {
    real_eigendirection(report, report.eig1.real(), &v1, &v2);
  }
  const Vec3 point = report.point;
  const Vec3 m0 = normalized(point + (ej * v1 + ek * v2) * perturbation);
  const double threshold = 10.0 * perturbation;
  const StopEvent escaped = [point, threshold](double, const Vec3& m) {
    return threshold - (m - point).norm();
  };
  const Trajectory tr = integrate(m0, zero, params, dt, out.horizon, escaped, stride);
  out.confirmed = tr.stopped;
  if (tr.stopped) {
    out.detection_time = tr.event_time;
    out.extreme_distance = threshold;
  } else {
    out.detection_time = out.horizon;
    for (const Vec3& m : tr.states) {
      out.extreme_distance = std::max(out.extreme_distance, (m - point).norm());
    }
  }
  return out;
}

}  // namespace magswitch
