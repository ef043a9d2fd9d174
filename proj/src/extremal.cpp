// Copyright 2026 the magswitch authors
// SPDX-License-Identifier: Apache-2.0

#include "magswitch/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace magswitch {

namespace {

struct State7 {
  Vec3 m;
  Vec3 psi;
  double lp;
};

State7 axpy(const State7& s, const State7& d, double h) {
  return {s.m + d.m * h, s.psi + d.psi * h, s.lp + d.lp * h};
}

State7 rhs7(const State7& s, double U, const MaterialParams& p) {
  const ExtremalDerivative d = extremal_rhs({s.m, s.psi, s.lp}, U, p);
  return {d.dm, d.dpsi, d.dlog_phi};
}

// One raw RK4 step (no renormalization).
State7 rk4_raw(const State7& s, double h, double U, const MaterialParams& p) {
  const State7 k1 = rhs7(s, U, p);
  const State7 k2 = rhs7(axpy(s, k1, 0.5 * h), U, p);
  const State7 k3 = rhs7(axpy(s, k2, 0.5 * h), U, p);
  const State7 k4 = rhs7(axpy(s, k3, h), U, p);
  State7 out = s;
  out.m += (k1.m + (k2.m + k3.m) * 2.0 + k4.m) * (h / 6.0);
  out.psi += (k1.psi + (k2.psi + k3.psi) * 2.0 + k4.psi) * (h / 6.0);
  out.lp += (k1.lp + (k2.lp + k3.lp) * 2.0 + k4.lp) * (h / 6.0);
  return out;
}

// Transported normal direction: right-hand side of the projected equation
// for Z = (psi x m)/|psi x m|.  (The two precession terms carry minus
// signs; that makes the expression invariant under D -> D - c I and zero
// for isotropic D, as the surrounding theory requires.)
Vec3 z_rhs(const Vec3& m, const Vec3& z, const MaterialParams& p) {
  const Vec3 mxz = cross(m, z);
  const Vec3 v = (cross(apply_demag(p, mxz), m) - cross(mxz, apply_demag(p, m))) * p.alpha -
                 cross(apply_demag(p, m), z) - cross(apply_demag(p, z), m);
  return v - z * dot(z, v);
}

// Catmull-Rom value of uniformly sampled points at grid coordinate x.
Vec3 sample_cubic(const std::vector<Vec3>& y, double x) {
  const int n = static_cast<int>(y.size());
  int i = static_cast<int>(std::floor(x));
  i = std::max(0, std::min(n - 2, i));
  const double s = x - i;
  const Vec3& p0 = y[std::max(0, i - 1)];
  const Vec3& p1 = y[i];
  const Vec3& p2 = y[i + 1];
  const Vec3& p3 = y[std::min(n - 1, i + 2)];
  const Vec3 a = p1 * 2.0;
  const Vec3 b = p2 - p0;
  const Vec3 c = p0 * 2.0 - p1 * 5.0 + p2 * 4.0 - p3;
  const Vec3 d = (p1 - p2) * 3.0 + p3 - p0;
  return (a + b * s + c * (s * s) + d * (s * s * s)) * 0.5;
}

}  // namespace

ExtremalDerivative extremal_rhs(const ExtremalState& s, double U, const MaterialParams& p) {
  const double c = U * sqrt1a2(p);
  const Vec3& m = s.m;
  const Vec3& psi = s.psi;
  const Vec3 dm_vec = apply_demag(p, m);
  const Vec3 dpsi_vec = apply_demag(p, psi);
  const Vec3 mxpsi = cross(m, psi);
  const Vec3 dmxpsi = apply_demag(p, mxpsi);

  ExtremalDerivative d;
  d.dm = (dm_vec - m * dot(dm_vec, m)) * -p.alpha + cross(m, dm_vec) + psi * c;
  d.dpsi = (dpsi_vec - psi * dot(dpsi_vec, psi)) * p.alpha - m * c - cross(dm_vec, psi) +
           dmxpsi - psi * dot(psi, dmxpsi) - m * dot(mxpsi, dm_vec);
  d.dlog_phi = p.alpha * (dot(dpsi_vec, psi) - dot(dm_vec, m)) + dot(psi, dmxpsi);
  return d;
}

PMPDiagnostics pmp_diagnostics(const ExtremalState& s, double U, const MaterialParams& p) {
  const double phi = std::exp(s.log_phi);
  const double root = sqrt1a2(p);
  const Vec3 dm_vec = apply_demag(p, s.m);
  const Vec3 drift = dm_vec * p.alpha - cross(s.m, dm_vec);
  const double H = U * root * phi - phi * dot(s.psi, drift);
  const Vec3 u = optimal_control(s, U, p);
  PMPDiagnostics out;
  out.hamiltonian_defect = std::abs(H - 1.0);
  out.transversality_defect = std::abs(phi * (U * U - dot(dm_vec, u)) - U / root);
  out.phi_boundary_defect = std::abs(U * root * phi - 1.0);
  return out;
}

Trajectory integrate_extremal(double launch_angle, double U, const MaterialParams& params,
                              double dt, double t_max, const StopEvent& stop, bool renormalize,
                              int record_stride) {
  params.validate();
  if (!(U > 0.0)) throw DomainError("integrate_extremal: U must be positive");
  if (!(dt > 0.0)) throw DomainError("integrate_extremal: dt must be positive");
  if (!(t_max > 0.0)) throw DomainError("integrate_extremal: t_max must be positive");
  if (record_stride < 1) record_stride = 1;

  const ExtremalState init = extremal_initial_state(launch_angle, U, params);
  State7 s{init.m, init.psi, init.log_phi};
  Trajectory traj;

  const auto record = [&](double tt, const State7& st, double defect) {
    traj.times.push_back(tt);
    traj.states.push_back(st.m);
    traj.costates.push_back(st.psi);
    traj.log_phi.push_back(st.lp);
    const ExtremalState es{st.m, st.psi, st.lp};
    traj.controls.push_back(optimal_control(es, U, params));
    traj.norm_defect.push_back(defect);
    traj.ham_defect.push_back(pmp_diagnostics(es, U, params).hamiltonian_defect);
  };

  double t = 0.0;
  double g_prev = 0.0;
  record(0.0, s, 0.0);
  if (stop) {
    g_prev = stop(0.0, s.m);
    if (g_prev <= 0.0) {
      traj.stopped = true;
      traj.event_time = 0.0;
      return traj;
    }
  }

  long step_index = 0;
  const double t_eps = 1e-12 * std::max(t_max, 1.0);
  while (t < t_max - t_eps) {
    const double t_next_full = dt * static_cast<double>(step_index + 1);
    const double t_target = (t_next_full >= t_max - t_eps) ? t_max : t_next_full;
    const double h = t_target - t;

    State7 next = rk4_raw(s, h, U, params);
    const double dm_norm = next.m.norm();
    const double dpsi_norm = next.psi.norm();
    double defect;
    if (renormalize) {
      defect = std::max(std::abs(dm_norm - 1.0), std::abs(dpsi_norm - 1.0));
      if (defect > 1e-3) {
        throw NumericalError("integrate_extremal: norm defect " + std::to_string(defect) +
                             " in one step at t=" + std::to_string(t) + "; decrease dt");
      }
      next.m = next.m / dm_norm;
      next.psi = next.psi / dpsi_norm;
    } else {
      defect = std::max(std::abs(dm_norm - 1.0), std::abs(dpsi_norm - 1.0));
    }

    if (stop) {
      const double g_new = stop(t_target, next.m);
      if (g_new <= 0.0) {
        const double frac = g_prev / (g_prev - g_new);
        const double t_event = t + frac * h;
        State7 at_event = s;
        if (frac > 0.0) {
          at_event = rk4_raw(s, frac * h, U, params);
          if (renormalize) {
            at_event.m = at_event.m / at_event.m.norm();
            at_event.psi = at_event.psi / at_event.psi.norm();
          }
        }
        record(t_event, at_event, 0.0);
        traj.stopped = true;
        traj.event_time = t_event;
        return traj;
      }
      g_prev = g_new;
    }

    s = next;
    t = t_target;
    ++step_index;
    if (t >= t_max - t_eps || step_index % record_stride == 0) {
      record(t, s, defect);
    }
  }
  return traj;
}

ThetaReduction theta_reduction(double U, const MaterialParams& params, double dt,
                               double t_max) {
  params.validate();
  if (!(U > 0.0)) throw DomainError("theta_reduction: U must be positive");
  if (std::abs(params.g2 - params.g3) > 1e-12) {
    throw DomainError("theta_reduction: requires gamma2 = gamma3 (within 1e-12)");
  }
  const double root = sqrt1a2(params);
  const double drive = U * root;
  const double barrier = params.alpha * (params.g2 - params.g1);
  const double u_crit = 0.5 * barrier / root;

  const auto rate = [&](double th) { return drive - barrier * std::sin(th) * std::cos(th); };

  ThetaReduction out;
  if (t_max <= 0.0) {
    if (U > u_crit) {
      const double closed = M_PI / (root * std::sqrt(U * U - u_crit * u_crit));
      t_max = 3.0 * closed;
    } else {
      t_max = 50.0 / std::max(barrier * params.alpha, 1e-3);
    }
  }

  const long total = static_cast<long>(std::ceil(t_max / dt));
  const long stride = std::max<long>(1, total / 20000);

  double th = 0.0;
  double t = 0.0;
  out.times.push_back(0.0);
  out.theta.push_back(0.0);
  long i = 0;
  const double t_eps = 1e-12 * std::max(t_max, 1.0);
  while (t < t_max - t_eps) {
    const double t_next_full = dt * static_cast<double>(i + 1);
    const double t_target = (t_next_full >= t_max - t_eps) ? t_max : t_next_full;
    const double h = t_target - t;
    const double k1 = rate(th);
    const double k2 = rate(th + 0.5 * h * k1);
    const double k3 = rate(th + 0.5 * h * k2);
    const double k4 = rate(th + h * k3);
    const double th_new = th + h / 6.0 * (k1 + 2.0 * (k2 + k3) + k4);
    if (th_new >= M_PI) {
      const double g0 = M_PI - th;
      const double g1 = M_PI - th_new;
      const double frac = g0 / (g0 - g1);
      out.switching_time = t + frac * h;
      out.reached = true;
      out.times.push_back(out.switching_time);
      out.theta.push_back(M_PI);
      return out;
    }
    th = th_new;
    t = t_target;
    ++i;
    if (t >= t_max - t_eps || i % stride == 0) {
      out.times.push_back(t);
      out.theta.push_back(th);
    }
  }
  // No crossing: the drive stalls at the first zero of the rate.
  const double ratio = std::min(1.0, 2.0 * drive / barrier);
  out.reached = false;
  out.stall_angle = 0.5 * std::asin(ratio);
  return out;
}

ZDynamicsReport z_dynamics_check(const Trajectory& traj, const MaterialParams& params) {
  params.validate();
  if (traj.costates.size() != traj.states.size() || traj.states.size() < 5) {
    throw DomainError("z_dynamics_check: needs an extremal trajectory (m and psi samples)");
  }
  const double h = traj.times[1] - traj.times[0];

  // m(t) between samples by cubic interpolation on the uniform core grid
  // (a shortened final event step only shrinks the last RK4 step).
  const auto m_at = [&](double t) { return sample_cubic(traj.states, t / h); };

  Vec3 z = cross(traj.costates[0], traj.states[0]).normalized();
  ZDynamicsReport rep;
  for (size_t i = 0; i + 1 < traj.states.size(); ++i) {
    const Vec3 ref = cross(traj.costates[i], traj.states[i]).normalized();
    rep.sup_deviation = std::max(rep.sup_deviation, (z - ref).norm());
    rep.max_rate = std::max(rep.max_rate, z_rhs(traj.states[i], z, params).norm());
    const double t0 = traj.times[i];
    const double step = traj.times[i + 1] - t0;
    // An event-shortened final step is off the uniform grid; interpolate it
    // locally between its own endpoints instead of through the cubic.
    const bool off_grid = (i + 2 == traj.states.size()) && std::abs(step - h) > 1e-9 * h;
    const auto stage_m = [&](double frac) {
      if (off_grid) return traj.states[i] + (traj.states[i + 1] - traj.states[i]) * frac;
      return m_at(t0 + frac * step);
    };
    const Vec3 k1 = z_rhs(stage_m(0.0), z, params);
    const Vec3 k2 = z_rhs(stage_m(0.5), z + k1 * (0.5 * step), params);
    const Vec3 k3 = z_rhs(stage_m(0.5), z + k2 * (0.5 * step), params);
    const Vec3 k4 = z_rhs(stage_m(1.0), z + k3 * step, params);
    z += (k1 + (k2 + k3) * 2.0 + k4) * (step / 6.0);
    z = z.normalized();
  }
  const Vec3 ref_end = cross(traj.costates.back(), traj.states.back()).normalized();
  rep.sup_deviation = std::max(rep.sup_deviation, (z - ref_end).norm());
  rep.max_rate = std::max(rep.max_rate, z_rhs(traj.states.back(), z, params).norm());
  return rep;
}

double planarity_measure(const Trajectory& traj) {
  if (traj.costates.size() != traj.states.size() || traj.states.empty()) {
    throw DomainError("planarity_measure: needs an extremal trajectory");
  }
  if (!traj.stopped || (traj.states.back() + kE1).norm() > 0.1) {
    throw DomainError("planarity_measure: trajectory did not reach -e1");
  }
  const Vec3 z_end = cross(traj.costates.back(), traj.states.back()).normalized();
  double sup = 0.0;
  for (const Vec3& m : traj.states) sup = std::max(sup, std::abs(dot(m, z_end)));
  return sup;
}

}  // namespace magswitch
