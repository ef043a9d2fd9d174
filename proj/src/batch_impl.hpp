// Copyright 2026 the magswitch authors
// SPDX-License-Identifier: Apache-2.0
//
// Lane-parallel kernel shared by the scalar and AVX2 batch translation
// units.  The arithmetic mirrors the single-trajectory extremal integrator
// expression for expression — same operation order, same per-step
// renormalization, same event interpolation — so a one-lane pack reproduces
// it and the two pack widths reproduce each other bitwise (the build
// disables FP contraction and the compiler may not reassociate).
//
// Everything here has internal linkage on purpose: the two translation
// units that include this header are compiled with different instruction
// sets, and no inline symbol may leak across that boundary (a linker
// picking the AVX2 copy for the scalar entry point would crash older CPUs).

#pragma once

#include <algorithm>
#include <cmath>

#include "magswitch/batch.hpp"
#include "magswitch/extremal.hpp"
#include "magswitch/params.hpp"
#include "magswitch/vec3.hpp"

namespace magswitch::detail {
namespace {

// ---------------------------------------------------------------------------
// Pack-generic 3-vector and 7-dimensional state arithmetic.  The expression
// order matches vec3.hpp and the single-lane integrator; keep them in sync.
// ---------------------------------------------------------------------------

template <class PT>
struct PackVec {
  using reg = typename PT::reg;
  reg x, y, z;

  PackVec operator+(const PackVec& o) const { return {x + o.x, y + o.y, z + o.z}; }
  PackVec operator-(const PackVec& o) const { return {x - o.x, y - o.y, z - o.z}; }
  PackVec operator*(reg s) const { return {x * s, y * s, z * s}; }
  PackVec operator/(reg s) const { return {x / s, y / s, z / s}; }
};

template <class PT>
typename PT::reg dot(const PackVec<PT>& a, const PackVec<PT>& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

template <class PT>
PackVec<PT> cross(const PackVec<PT>& a, const PackVec<PT>& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

template <class PT>
struct PackState {
  PackVec<PT> m;
  PackVec<PT> psi;
  typename PT::reg lp;
};

template <class PT>
PackState<PT> axpy(const PackState<PT>& s, const PackState<PT>& d, typename PT::reg h) {
  return {s.m + d.m * h, s.psi + d.psi * h, s.lp + d.lp * h};
}

// Broadcast material constants.
template <class PT>
struct PackParams {
  typename PT::reg g1, g2, g3;       // demagnetizing factors
  typename PT::reg alpha, neg_alpha; // damping and its exact negation
  typename PT::reg c;                // U sqrt(1 + alpha^2)
};

template <class PT>
PackVec<PT> apply_demag(const PackParams<PT>& p, const PackVec<PT>& m) {
  return {p.g1 * m.x, p.g2 * m.y, p.g3 * m.z};
}

template <class PT>
PackState<PT> extremal_rhs(const PackState<PT>& s, const PackParams<PT>& p) {
  const PackVec<PT>& m = s.m;
  const PackVec<PT>& psi = s.psi;
  const PackVec<PT> dm_vec = apply_demag(p, m);
  const PackVec<PT> dpsi_vec = apply_demag(p, psi);
  const PackVec<PT> mxpsi = cross(m, psi);
  const PackVec<PT> dmxpsi = apply_demag(p, mxpsi);

  PackState<PT> d;
  d.m = (dm_vec - m * dot(dm_vec, m)) * p.neg_alpha + cross(m, dm_vec) + psi * p.c;
  d.psi = (dpsi_vec - psi * dot(dpsi_vec, psi)) * p.alpha - m * p.c - cross(dm_vec, psi) +
          dmxpsi - psi * dot(psi, dmxpsi) - m * dot(mxpsi, dm_vec);
  d.lp = p.alpha * (dot(dpsi_vec, psi) - dot(dm_vec, m)) + dot(psi, dmxpsi);
  return d;
}

// One raw RK4 step with k1 supplied by the caller (the derivative at s is
// already known from the previous step's hit bookkeeping, and reusing it
// keeps the step at four derivative evaluations).
template <class PT>
PackState<PT> rk4_step(const PackState<PT>& s, const PackState<PT>& k1, double h,
                       const PackParams<PT>& p) {
  const auto h05 = PT::broadcast(0.5 * h);
  const auto hb = PT::broadcast(h);
  const auto h6 = PT::broadcast(h / 6.0);
  const auto two = PT::broadcast(2.0);
  const PackState<PT> k2 = extremal_rhs(axpy(s, k1, h05), p);
  const PackState<PT> k3 = extremal_rhs(axpy(s, k2, h05), p);
  const PackState<PT> k4 = extremal_rhs(axpy(s, k3, hb), p);
  PackState<PT> out = s;
  out.m = out.m + (k1.m + (k2.m + k3.m) * two + k4.m) * h6;
  out.psi = out.psi + (k1.psi + (k2.psi + k3.psi) * two + k4.psi) * h6;
  out.lp = out.lp + (k1.lp + (k2.lp + k3.lp) * two + k4.lp) * h6;
  return out;
}

// ---------------------------------------------------------------------------
// Plain double single-lane step, used to land a lane exactly on an
// interpolated hit time.  Must stay in lockstep with rk4_step above.
// ---------------------------------------------------------------------------

struct LaneState {
  Vec3 m;
  Vec3 psi;
  double lp;
};

inline LaneState lane_rhs(const LaneState& s, double U, const MaterialParams& p) {
  const ExtremalDerivative d = magswitch::extremal_rhs({s.m, s.psi, s.lp}, U, p);
  return {d.dm, d.dpsi, d.dlog_phi};
}

inline LaneState lane_axpy(const LaneState& s, const LaneState& d, double h) {
  return {s.m + d.m * h, s.psi + d.psi * h, s.lp + d.lp * h};
}

inline LaneState lane_rk4(const LaneState& s, double h, double U, const MaterialParams& p) {
  const LaneState k1 = lane_rhs(s, U, p);
  const LaneState k2 = lane_rhs(lane_axpy(s, k1, 0.5 * h), U, p);
  const LaneState k3 = lane_rhs(lane_axpy(s, k2, 0.5 * h), U, p);
  const LaneState k4 = lane_rhs(lane_axpy(s, k3, h), U, p);
  LaneState out = s;
  out.m += (k1.m + (k2.m + k3.m) * 2.0 + k4.m) * (h / 6.0);
  out.psi += (k1.psi + (k2.psi + k3.psi) * 2.0 + k4.psi) * (h / 6.0);
  out.lp += (k1.lp + (k2.lp + k3.lp) * 2.0 + k4.lp) * (h / 6.0);
  return out;
}

// ---------------------------------------------------------------------------
// The lockstep driver: integrates exactly PT::width lanes.
// ---------------------------------------------------------------------------

template <class PT>
void run_block(const double* launch_angles, LaneResult* out, const BatchOptions& opt,
               const MaterialParams& par) {
  constexpr int W = PT::width;
  using reg = typename PT::reg;

  const double U = opt.U;
  const double tol = opt.target_tol;
  const double tol2 = tol * tol;
  // Dip crossings aim slightly inside the ball so the quadratic model's
  // error (measured below 2e-3 of tol) cannot push the landed state back
  // outside the tolerance.
  const double te2 = (0.995 * tol) * (0.995 * tol);

  PackParams<PT> pp;
  pp.g1 = PT::broadcast(par.g1);
  pp.g2 = PT::broadcast(par.g2);
  pp.g3 = PT::broadcast(par.g3);
  pp.alpha = PT::broadcast(par.alpha);
  pp.neg_alpha = PT::broadcast(-par.alpha);
  pp.c = PT::broadcast(U * sqrt1a2(par));

  // Per-lane initial state from the shared scalar helper, packed into lanes.
  double mx[W], my[W], mz[W], px[W], py[W], pz[W], lpv[W];
  for (int l = 0; l < W; ++l) {
    const ExtremalState s0 = extremal_initial_state(launch_angles[l], U, par);
    mx[l] = s0.m.x;
    my[l] = s0.m.y;
    mz[l] = s0.m.z;
    px[l] = s0.psi.x;
    py[l] = s0.psi.y;
    pz[l] = s0.psi.z;
    lpv[l] = s0.log_phi;
    out[l] = LaneResult{};
    out[l].theta = launch_angles[l];
  }

  PackState<PT> s;
  s.m = {PT::load(mx), PT::load(my), PT::load(mz)};
  s.psi = {PT::load(px), PT::load(py), PT::load(pz)};
  s.lp = PT::load(lpv);

  // Derivative at the current state; doubles as RK4's k1.
  PackState<PT> r = extremal_rhs(s, pp);

  // d2 = |m + e1|^2 and q = (m + e1) . mdot (half the time derivative of
  // d2), per lane, at the start of the pending step.
  const reg one = PT::broadcast(1.0);
  double d2_prev[W], q_prev[W];
  {
    const reg ex = s.m.x + one;
    const reg d2 = ex * ex + s.m.y * s.m.y + s.m.z * s.m.z;
    const reg q = ex * r.m.x + s.m.y * r.m.y + s.m.z * r.m.z;
    PT::store(d2_prev, d2);
    PT::store(q_prev, q);
  }

  bool done[W] = {};
  double closest2[W], closest_t[W];
  for (int l = 0; l < W; ++l) {
    closest2[l] = 4.0;  // |m(0) + e1|^2 with m(0) = e1
    closest_t[l] = 0.0;
  }
  int n_done = 0;
  bool any_hit = false;

  double d2_new[W], q_new[W], mnorm[W], pnorm[W];
  double smx[W], smy[W], smz[W], spx[W], spy[W], spz[W], slp[W];

  double t = 0.0;
  long step_index = 0;
  const double t_eps = 1e-12 * std::max(opt.t_max, 1.0);
  while (t < opt.t_max - t_eps && n_done < W) {
    const double t_next_full = opt.dt * static_cast<double>(step_index + 1);
    const double t_target = (t_next_full >= opt.t_max - t_eps) ? opt.t_max : t_next_full;
    const double h = t_target - t;

    PackState<PT> next = rk4_step(s, r, h, pp);

    // Renormalize m and psi exactly as the single-lane integrator does,
    // logging the pre-renormalization norms for the defect guard.
    const reg mn = PT::sqrt(next.m.x * next.m.x + next.m.y * next.m.y + next.m.z * next.m.z);
    const reg pn =
        PT::sqrt(next.psi.x * next.psi.x + next.psi.y * next.psi.y + next.psi.z * next.psi.z);
    next.m = next.m / mn;
    next.psi = next.psi / pn;
    PT::store(mnorm, mn);
    PT::store(pnorm, pn);

    // Derivative at the renormalized endpoint: the next step's k1 and the
    // endpoint slope for the hit bookkeeping.
    const PackState<PT> rn = extremal_rhs(next, pp);
    {
      const reg ex = next.m.x + one;
      const reg d2 = ex * ex + next.m.y * next.m.y + next.m.z * next.m.z;
      const reg q = ex * rn.m.x + next.m.y * rn.m.y + next.m.z * rn.m.z;
      PT::store(d2_new, d2);
      PT::store(q_new, q);
    }

    bool have_start = false;  // step-start lanes extracted on first demand
    for (int l = 0; l < W; ++l) {
      if (done[l]) continue;

      // Same one-step defect threshold as the single-lane integrator; a
      // diverging lane freezes as a miss instead of aborting the block.
      const double defect = std::max(std::abs(mnorm[l] - 1.0), std::abs(pnorm[l] - 1.0));
      if (!(defect <= 1e-3)) {
        out[l].diverged = true;
        done[l] = true;
        ++n_done;
        continue;
      }

      double hit_frac = -1.0;
      if (d2_new[l] <= tol2) {
        // The step ends inside the tolerance: locate the crossing linearly
        // in the distance, as the single-lane event integrator does.
        const double d0 = std::sqrt(d2_prev[l]);
        const double d1 = std::sqrt(d2_new[l]);
        hit_frac = (d0 - tol) / (d0 - d1);
      } else if (q_prev[l] < 0.0 && q_new[l] >= 0.0) {
        // The distance dipped inside the step.  With q linear over the
        // step, the squared distance is quadratic; its minimum sits at
        // fraction sstar.
        const double sstar = q_prev[l] / (q_prev[l] - q_new[l]);
        const double d2min = d2_prev[l] + h * q_prev[l] * sstar;
        if (d2min <= te2) {
          // First crossing of the inset mark: smaller root of
          //   d2_prev + 2 q_prev h f + (q_new - q_prev) h f^2 = te2
          // in the cancellation-free form.
          const double qa = (q_new[l] - q_prev[l]) * h;
          const double qb = 2.0 * q_prev[l] * h;
          const double qc = d2_prev[l] - te2;
          const double disc = std::max(0.0, qb * qb - 4.0 * qa * qc);
          hit_frac = (2.0 * qc) / (-qb + std::sqrt(disc));
        } else if (d2min <= tol2) {
          // Shallow dip between the inset mark and the tolerance: land on
          // the dip minimum itself.
          hit_frac = sstar;
        } else if (d2min < closest2[l]) {
          closest2[l] = d2min;
          closest_t[l] = t + sstar * h;
        }
      }

      if (hit_frac >= 0.0) {
        if (!have_start) {
          PT::store(smx, s.m.x);
          PT::store(smy, s.m.y);
          PT::store(smz, s.m.z);
          PT::store(spx, s.psi.x);
          PT::store(spy, s.psi.y);
          PT::store(spz, s.psi.z);
          PT::store(slp, s.lp);
          have_start = true;
        }
        LaneState ev{{smx[l], smy[l], smz[l]}, {spx[l], spy[l], spz[l]}, slp[l]};
        if (hit_frac > 0.0) {
          ev = lane_rk4(ev, hit_frac * h, U, par);
          ev.m = ev.m / ev.m.norm();
          ev.psi = ev.psi / ev.psi.norm();
        }
        out[l].hit = true;
        out[l].hit_time = t + hit_frac * h;
        out[l].hit_state = {ev.m, ev.psi, ev.lp};
        out[l].closest = (ev.m + kE1).norm();
        out[l].closest_time = out[l].hit_time;
        done[l] = true;
        ++n_done;
        any_hit = true;
        continue;
      }

      if (d2_new[l] < closest2[l]) {
        closest2[l] = d2_new[l];
        closest_t[l] = t_target;
      }
    }

    s = next;
    r = rn;
    for (int l = 0; l < W; ++l) {
      d2_prev[l] = d2_new[l];
      q_prev[l] = q_new[l];
    }
    t = t_target;
    ++step_index;
    if (opt.stop == BatchStop::kAnyHit && any_hit) break;
  }

  for (int l = 0; l < W; ++l) {
    if (!done[l] || out[l].diverged) {
      out[l].closest = std::sqrt(closest2[l]);
      out[l].closest_time = closest_t[l];
    }
  }
}

}  // namespace
}  // namespace magswitch::detail
