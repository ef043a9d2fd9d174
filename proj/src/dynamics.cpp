// Copyright 2026 the magswitch authors
// SPDX-License-Identifier: Apache-2.0

#include "magswitch/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace magswitch {

namespace {

// One RK4 step of length h from (t, m); returns the un-normalized result.
Vec3 rk4_raw(const Vec3& m, double t, double h, const ControlLaw& control,
             const MaterialParams& p) {
  const Vec3 k1 = ll_rhs(m, control(t, m), p);
  const Vec3 m2 = m + k1 * (0.5 * h);
  const Vec3 k2 = ll_rhs(m2, control(t + 0.5 * h, m2), p);
  const Vec3 m3 = m + k2 * (0.5 * h);
  const Vec3 k3 = ll_rhs(m3, control(t + 0.5 * h, m3), p);
  const Vec3 m4 = m + k3 * h;
  const Vec3 k4 = ll_rhs(m4, control(t + h, m4), p);
  return m + (k1 + (k2 + k3) * 2.0 + k4) * (h / 6.0);
}

// Fourth-order first derivative of a uniformly sampled sequence.
// Five-point one-sided stencils at the two samples nearest each end.
std::vector<Vec3> derivative4(const std::vector<Vec3>& y, double h) {
  const int n = static_cast<int>(y.size());
  std::vector<Vec3> d(n);
  const double s = 1.0 / (12.0 * h);
  d[0] = (y[0] * -25.0 + y[1] * 48.0 + y[2] * -36.0 + y[3] * 16.0 + y[4] * -3.0) * s;
  d[1] = (y[0] * -3.0 + y[1] * -10.0 + y[2] * 18.0 + y[3] * -6.0 + y[4] * 1.0) * s;
  for (int i = 2; i < n - 2; ++i) {
    d[i] = (y[i - 2] - y[i - 1] * 8.0 + y[i + 1] * 8.0 - y[i + 2]) * s;
  }
  d[n - 2] = (y[n - 1] * 3.0 + y[n - 2] * 10.0 + y[n - 3] * -18.0 + y[n - 4] * 6.0 +
              y[n - 5] * -1.0) * s;
  d[n - 1] = (y[n - 1] * 25.0 + y[n - 2] * -48.0 + y[n - 3] * 36.0 + y[n - 4] * -16.0 +
              y[n - 5] * 3.0) * s;
  return d;
}

double uniform_step_or_throw(const std::vector<double>& times, const char* who) {
  if (times.size() < 5) {
    throw DomainError(std::string(who) + ": need at least five samples");
  }
  const double h = times[1] - times[0];
  if (!(h > 0.0)) throw DomainError(std::string(who) + ": times must be increasing");
  for (size_t i = 1; i + 1 < times.size(); ++i) {
    if (std::abs((times[i + 1] - times[i]) - h) > 1e-9 * std::max(h, 1.0)) {
      throw DomainError(std::string(who) + ": requires a uniform time grid");
    }
  }
  return h;
}

}  // namespace

Trajectory integrate(const Vec3& m0, const ControlLaw& control, const MaterialParams& params,
                     double dt, double t_max, const StopEvent& stop, int record_stride) {
  params.validate();
  if (!(dt > 0.0)) throw DomainError("integrate: dt must be positive");
  if (!(t_max > 0.0)) throw DomainError("integrate: t_max must be positive");
  if (record_stride < 1) record_stride = 1;

  Trajectory traj;
  Vec3 m = m0.normalized();
  double t = 0.0;
  double g_prev = 0.0;

  const auto record = [&](double tt, const Vec3& mm, double defect) {
    traj.times.push_back(tt);
    traj.states.push_back(mm);
    traj.controls.push_back(control(tt, mm));
    traj.norm_defect.push_back(defect);
  };

  record(0.0, m, 0.0);
  if (stop) {
    g_prev = stop(0.0, m);
    if (g_prev <= 0.0) {
      traj.stopped = true;
      traj.event_time = 0.0;
      return traj;
    }
  }

  long step_index = 0;
  const double t_eps = 1e-12 * std::max(t_max, 1.0);
  while (t < t_max - t_eps) {
    // Keep grid times as exact multiples of dt (no accumulation drift); the
    // final step is shortened to land exactly on t_max.
    const double t_next_full = dt * static_cast<double>(step_index + 1);
    const double t_target = (t_next_full >= t_max - t_eps) ? t_max : t_next_full;
    const double h = t_target - t;
    const Vec3 raw = rk4_raw(m, t, h, control, params);
    const double norm = raw.norm();
    const double defect = std::abs(norm - 1.0);
    if (defect > 1e-3) {
      throw NumericalError("integrate: norm defect " + std::to_string(defect) +
                           " in one step at t=" + std::to_string(t) +
                           "; decrease dt");
    }
    const Vec3 m_new = raw / norm;
    const double t_new = t_target;

    if (stop) {
      const double g_new = stop(t_new, m_new);
      if (g_new <= 0.0) {
        // Linear interpolation of the event function locates the firing
        // time; a partial step of that length produces the final state.
        const double s = g_prev / (g_prev - g_new);
        const double t_event = t + s * h;
        Vec3 m_event = m;
        if (s > 0.0) {
          const Vec3 raw_e = rk4_raw(m, t, s * h, control, params);
          m_event = raw_e / raw_e.norm();
        }
        record(t_event, m_event, 0.0);
        traj.stopped = true;
        traj.event_time = t_event;
        return traj;
      }
      g_prev = g_new;
    }

    m = m_new;
    t = t_new;
    ++step_index;
    if (t >= t_max - t_eps || step_index % record_stride == 0) {
      record(t, m, defect);
    }
  }
  return traj;
}

std::vector<Vec3> reconstruct_control(const std::vector<double>& times,
                                      const std::vector<Vec3>& states,
                                      const std::function<double(double)>& lambda,
                                      const MaterialParams& params) {
  params.validate();
  if (times.size() != states.size()) {
    throw DomainError("reconstruct_control: times/states length mismatch");
  }
  const double h = uniform_step_or_throw(times, "reconstruct_control");
  const std::vector<Vec3> mdot = derivative4(states, h);

  const double inv = 1.0 / (1.0 + params.alpha * params.alpha);
  std::vector<Vec3> u(states.size());
  for (size_t i = 0; i < states.size(); ++i) {
    const Vec3& m = states[i];
    const Vec3 dm = apply_demag(params, m);
    Vec3 ui = (mdot[i] * params.alpha + cross(m, mdot[i])) * inv + dm - m * dot(dm, m);
    if (lambda) ui += m * lambda(times[i]);
    u[i] = ui;
  }
  return u;
}

double lambda_functional(const std::vector<double>& times, const std::vector<Vec3>& states,
                         const MaterialParams& params) {
  params.validate();
  if (times.size() != states.size()) {
    throw DomainError("lambda_functional: times/states length mismatch");
  }
  const double h = uniform_step_or_throw(times, "lambda_functional");
  const std::vector<Vec3> mdot = derivative4(states, h);

  double sup = 0.0;
  for (size_t i = 0; i < states.size(); ++i) {
    if (mdot[i].norm() < 1e-12) {
      if (i == 0 || i + 1 == states.size()) continue;  // at rest at an equilibrium
      throw NumericalError("lambda_functional: stagnation point (|mdot| < 1e-12) at sample " +
                           std::to_string(i) + ", t=" + std::to_string(times[i]));
    }
    sup = std::max(sup, admissibility_integrand(states[i], mdot[i], params));
  }
  return sup;
}

}  // namespace magswitch
