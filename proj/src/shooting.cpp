// Copyright 2026 the magswitch authors
// SPDX-License-Identifier: Apache-2.0

#include "magswitch/shooting.hpp"

#include <algorithm>
#include <cmath>

#include "magswitch/extremal.hpp"

namespace magswitch {

namespace {

// Misses rank above every hit in the scan objective; within the misses the
// closest approach orders the valleys.
constexpr double kMissOffset = 1e9;

double objective_of(const LaneResult& lane) {
  return lane.hit ? lane.hit_time : kMissOffset + lane.closest;
}

BatchOptions lane_options(const ShootingConfig& c, const MaterialParams& p, BatchStop stop) {
  BatchOptions o;
  o.U = c.U;
  o.dt = c.resolved_dt(p);
  o.t_max = c.resolved_t_max(p);
  o.target_tol = c.target_tol;
  o.stop = stop;
  return o;
}

LaneResult probe_one(double theta, const BatchOptions& opt, const MaterialParams& par) {
  return batch_shoot({theta}, opt, par).lanes.front();
}

std::vector<double> theta_grid(int n) {
  std::vector<double> grid(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) grid[static_cast<std::size_t>(i)] = 2.0 * M_PI * i / n;
  return grid;
}

struct RefineOutcome {
  double theta = 0.0;
  LaneResult lane;
  double value = kMissOffset + 4.0;
};

void consider(RefineOutcome& best, double theta, const LaneResult& lane) {
  const double v = objective_of(lane);
  if (v < best.value) {
    best.value = v;
    best.theta = theta;
    best.lane = lane;
  }
}

// Golden-section minimization of the scan objective on [lo, hi], tracking
// the best probe seen.  The objective is locally unimodal around one
// valley: the closest approach slopes down toward a hit window and the
// switching time is smooth inside it, so the section steps walk misses
// into the window and then minimize the time.
RefineOutcome golden_refine(double lo, double hi, const BatchOptions& opt,
                            const MaterialParams& par, RefineOutcome best) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - gr * (hi - lo);
  double x2 = lo + gr * (hi - lo);
  LaneResult l1 = probe_one(x1, opt, par);
  LaneResult l2 = probe_one(x2, opt, par);
  consider(best, x1, l1);
  consider(best, x2, l2);
  while (hi - lo > 1e-11) {
    if (objective_of(l1) <= objective_of(l2)) {
      hi = x2;
      x2 = x1;
      l2 = l1;
      x1 = hi - gr * (hi - lo);
      l1 = probe_one(x1, opt, par);
      consider(best, x1, l1);
    } else {
      lo = x1;
      x1 = x2;
      l1 = l2;
      x2 = lo + gr * (hi - lo);
      l2 = probe_one(x2, opt, par);
      consider(best, x2, l2);
    }
  }
  return best;
}

// Sample thinning: keep roughly two thousand samples however long the run.
int thinning_stride(double t_end, double dt) {
  const double total = std::ceil(t_end / dt);
  return static_cast<int>(total / 2000.0) + 1;
}

// Path of a hit up to its switching time.  The trajectory is marked stopped
// at the switching time so downstream consumers (planarity, exports) see a
// completed switch; its final sample sits within the target ball.
Trajectory record_hit_path(double theta, double switching_time, const ShootingConfig& c,
                           const MaterialParams& p, bool full_resolution) {
  const double dt = c.resolved_dt(p);
  const int stride = full_resolution ? 1 : thinning_stride(switching_time, dt);
  Trajectory tr = integrate_extremal(theta, c.U, p, dt, switching_time, nullptr, true, stride);
  tr.stopped = true;
  tr.event_time = switching_time;
  return tr;
}

Trajectory record_miss_path(double theta, const ShootingConfig& c, const MaterialParams& p) {
  const double dt = c.resolved_dt(p);
  const double horizon = c.resolved_t_max(p);
  return integrate_extremal(theta, c.U, p, dt, horizon, nullptr, true,
                            thinning_stride(horizon, dt));
}

// Refinement seeds: the cyclic local minima of the per-lane objective,
// plus the few miss lanes with the smallest closest approach.  Hit windows
// narrower than the grid spacing announce themselves by a small closest
// approach on nearby lanes even when the valley's minimum lane sits in a
// different basin, so the extra seeds let the refinement walk into windows
// no grid lane resolves.  A grid where every lane hits at the same time
// (rotationally degenerate configurations) collapses to its single best
// lane instead of refining all of them.
std::vector<int> candidate_valleys(const std::vector<LaneResult>& lanes) {
  const int n = static_cast<int>(lanes.size());
  bool all_hit = true;
  double t_min = 0.0, t_max = 0.0;
  int argmin = 0;
  for (int i = 0; i < n; ++i) {
    if (!lanes[static_cast<std::size_t>(i)].hit) {
      all_hit = false;
      break;
    }
    const double t = lanes[static_cast<std::size_t>(i)].hit_time;
    if (i == 0 || t < t_min) t_min = t;
    if (i == 0) t_max = t;
    if (t < lanes[static_cast<std::size_t>(argmin)].hit_time) argmin = i;
    if (t > t_max) t_max = t;
  }
  if (all_hit && t_max - t_min <= 1e-9 * std::max(1.0, t_min)) return {argmin};

  std::vector<int> out;
  for (int i = 0; i < n; ++i) {
    const double f = objective_of(lanes[static_cast<std::size_t>(i)]);
    const double fp = objective_of(lanes[static_cast<std::size_t>((i + n - 1) % n)]);
    const double fn = objective_of(lanes[static_cast<std::size_t>((i + 1) % n)]);
    if (f <= fp && f <= fn) out.push_back(i);
  }

  constexpr int kExtraMissSeeds = 4;
  std::vector<int> misses;
  for (int i = 0; i < n; ++i) {
    if (!lanes[static_cast<std::size_t>(i)].hit) misses.push_back(i);
  }
  std::sort(misses.begin(), misses.end(), [&](int a, int b) {
    return lanes[static_cast<std::size_t>(a)].closest < lanes[static_cast<std::size_t>(b)].closest;
  });
  int added = 0;
  for (int i : misses) {
    if (added == kExtraMissSeeds) break;
    if (std::find(out.begin(), out.end(), i) == out.end()) {
      out.push_back(i);
      ++added;
    }
  }
  return out;
}

// Merge refinements that walked into the same window (cyclic distance
// below one grid-spacing worth of slack), keeping the better outcome.
std::vector<RefineOutcome> dedupe_refinements(std::vector<RefineOutcome> refined) {
  std::sort(refined.begin(), refined.end(),
            [](const RefineOutcome& a, const RefineOutcome& b) { return a.theta < b.theta; });
  std::vector<RefineOutcome> kept;
  for (const RefineOutcome& r : refined) {
    bool merged = false;
    for (RefineOutcome& k : kept) {
      double d = std::abs(r.theta - k.theta);
      d = std::min(d, std::abs(2.0 * M_PI - d));
      if (d < 1e-3) {
        if (r.value < k.value) k = r;
        merged = true;
        break;
      }
    }
    if (!merged) kept.push_back(r);
  }
  std::sort(kept.begin(), kept.end(),
            [](const RefineOutcome& a, const RefineOutcome& b) { return a.theta < b.theta; });
  return kept;
}

ShotRecord record_from_lane(const LaneResult& lane, double theta, const ShootingConfig& config,
                            const MaterialParams& params, bool record_trajectory) {
  ShotRecord rec;
  rec.theta = theta;
  rec.hit = lane.hit;
  rec.switching_time = lane.hit ? lane.hit_time : 0.0;
  rec.closest = lane.closest;
  rec.closest_time = lane.closest_time;
  if (record_trajectory && !lane.diverged) {
    rec.trajectory = lane.hit ? record_hit_path(theta, lane.hit_time, config, params, false)
                              : record_miss_path(theta, config, params);
  }
  return rec;
}

}  // namespace

void ShootingConfig::validate() const {
  if (!(U > 0.0)) throw DomainError("ShootingConfig: U must be positive");
  if (theta_grid_size < 8) {
    throw DomainError("ShootingConfig: theta_grid_size must be at least 8");
  }
  if (!(target_tol > 0.0) || !(target_tol <= 0.1)) {
    throw DomainError("ShootingConfig: target_tol must lie in (0, 0.1]");
  }
  if (t_max < 0.0 || !std::isfinite(t_max)) {
    throw DomainError("ShootingConfig: t_max must be positive (or 0 for the derived horizon)");
  }
  if (dt < 0.0 || !std::isfinite(dt)) {
    throw DomainError("ShootingConfig: dt must be positive (or 0 for the default step)");
  }
}

double ShootingConfig::resolved_dt(const MaterialParams& params) const {
  return dt > 0.0 ? dt : default_time_step(U, params);
}

double ShootingConfig::resolved_t_max(const MaterialParams& params) const {
  if (t_max > 0.0) return t_max;
  // One scale for the driven rotation, one for the slow anisotropy drift.
  return 10.0 * M_PI / (U * sqrt1a2(params)) +
         10.0 / (params.alpha * std::max(params.dgm(), 1e-3));
}

ShotRecord shoot_one(double launch_angle, const ShootingConfig& config,
                     const MaterialParams& params, bool record_trajectory) {
  params.validate();
  config.validate();
  const BatchOptions opt = lane_options(config, params, BatchStop::kAllDone);
  const LaneResult lane = probe_one(launch_angle, opt, params);
  return record_from_lane(lane, launch_angle, config, params, record_trajectory);
}

ShootingResult shoot_scan(const ShootingConfig& config, const MaterialParams& params) {
  params.validate();
  config.validate();

  const std::vector<double> grid = theta_grid(config.theta_grid_size);
  const double spacing = 2.0 * M_PI / config.theta_grid_size;
  const BatchOptions opt = lane_options(config, params, BatchStop::kAllDone);
  const BatchResult batch = batch_shoot(grid, opt, params);

  ShootingResult out;
  out.kernel = batch.kernel;
  for (const LaneResult& lane : batch.lanes) {
    if (!lane.hit) out.miss_summary.push_back({lane.theta, lane.closest, lane.closest_time});
  }

  std::vector<RefineOutcome> refined;
  for (int i : candidate_valleys(batch.lanes)) {
    RefineOutcome seed;
    seed.theta = grid[static_cast<std::size_t>(i)];
    seed.lane = batch.lanes[static_cast<std::size_t>(i)];
    seed.value = objective_of(seed.lane);
    refined.push_back(golden_refine(seed.theta - spacing, seed.theta + spacing, opt, params, seed));
  }

  for (const RefineOutcome& r : dedupe_refinements(std::move(refined))) {
    if (!r.lane.hit) continue;
    ShootingHit h;
    h.theta = r.theta;
    h.switching_time = r.lane.hit_time;
    out.hits.push_back(std::move(h));
  }

  if (!out.hits.empty()) {
    std::size_t arg = 0;
    for (std::size_t i = 1; i < out.hits.size(); ++i) {
      if (out.hits[i].switching_time < out.hits[arg].switching_time) arg = i;
    }
    out.best = BestHit{out.hits[arg].theta, out.hits[arg].switching_time, arg};
  }

  for (std::size_t i = 0; i < out.hits.size(); ++i) {
    const bool full = out.best && i == out.best->hit_index;
    out.hits[i].trajectory =
        record_hit_path(out.hits[i].theta, out.hits[i].switching_time, config, params, full);
  }
  return out;
}

ShotRecord refine_theta_near(double seed, double half_width, const ShootingConfig& config,
                             const MaterialParams& params) {
  params.validate();
  config.validate();
  if (!(half_width > 0.0) || !(half_width <= M_PI)) {
    throw DomainError("refine_theta_near: half_width must lie in (0, pi]");
  }

  const BatchOptions opt = lane_options(config, params, BatchStop::kAllDone);
  constexpr int kSub = 33;
  std::vector<double> sub(kSub);
  for (int j = 0; j < kSub; ++j) {
    sub[static_cast<std::size_t>(j)] = seed - half_width + 2.0 * half_width * j / (kSub - 1);
  }
  const BatchResult batch = batch_shoot(sub, opt, params);

  int arg = 0;
  for (int j = 1; j < kSub; ++j) {
    if (objective_of(batch.lanes[static_cast<std::size_t>(j)]) <
        objective_of(batch.lanes[static_cast<std::size_t>(arg)])) {
      arg = j;
    }
  }
  RefineOutcome best;
  best.theta = sub[static_cast<std::size_t>(arg)];
  best.lane = batch.lanes[static_cast<std::size_t>(arg)];
  best.value = objective_of(best.lane);

  const double lo = sub[static_cast<std::size_t>(std::max(0, arg - 1))];
  const double hi = sub[static_cast<std::size_t>(std::min(kSub - 1, arg + 1))];
  const RefineOutcome r = golden_refine(lo, hi, opt, params, best);
  return record_from_lane(r.lane, r.theta, config, params, true);
}

namespace {

// The bisection predicate: does any launch angle reach the target?  The
// grid answers directly when a lane hits; otherwise, optionally chase the
// deepest closest-approach valleys by golden section before declaring a
// miss (hit windows narrower than the grid spacing hide between lanes).
bool any_hit_at(double U, const ShootingConfig& base, const MaterialParams& params,
                int refine_candidates) {
  ShootingConfig c = base;
  c.U = U;
  const BatchOptions opt = lane_options(c, params, BatchStop::kAnyHit);
  const std::vector<double> grid = theta_grid(c.theta_grid_size);
  const double spacing = 2.0 * M_PI / c.theta_grid_size;
  const BatchResult batch = batch_shoot(grid, opt, params);
  for (const LaneResult& lane : batch.lanes) {
    if (lane.hit) return true;
  }
  if (refine_candidates <= 0) return false;

  std::vector<int> valleys = candidate_valleys(batch.lanes);
  std::sort(valleys.begin(), valleys.end(), [&](int a, int b) {
    return batch.lanes[static_cast<std::size_t>(a)].closest <
           batch.lanes[static_cast<std::size_t>(b)].closest;
  });
  if (static_cast<int>(valleys.size()) > refine_candidates) {
    valleys.resize(static_cast<std::size_t>(refine_candidates));
  }

  BatchOptions popt = opt;
  popt.stop = BatchStop::kAllDone;
  for (int i : valleys) {
    RefineOutcome seed;
    seed.theta = grid[static_cast<std::size_t>(i)];
    seed.lane = batch.lanes[static_cast<std::size_t>(i)];
    seed.value = objective_of(seed.lane);
    const RefineOutcome r =
        golden_refine(seed.theta - spacing, seed.theta + spacing, popt, params, seed);
    if (r.lane.hit) return true;
  }
  return false;
}

}  // namespace

double find_ucrit(const MaterialParams& params, double u_lo, double u_hi, double tol,
                  const ShootingConfig& base_config, int refine_candidates) {
  params.validate();
  ShootingConfig check = base_config;
  check.U = 1.0;  // the intensity is swept; validate the remaining fields
  check.validate();
  if (!(u_lo > 0.0) || !(u_hi > u_lo) || !std::isfinite(u_hi)) {
    throw DomainError("find_ucrit: need 0 < u_lo < u_hi");
  }
  if (!(tol > 0.0)) throw DomainError("find_ucrit: tol must be positive");

  // A hit at the lower edge means the bracket is already collapsed:
  // barrier-free materials switch at every positive intensity.
  if (any_hit_at(u_lo, base_config, params, refine_candidates)) return u_lo;
  if (!any_hit_at(u_hi, base_config, params, refine_candidates)) {
    throw DomainError("find_ucrit: no switching detected at the upper bracket edge");
  }

  double lo = u_lo;
  double hi = u_hi;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (any_hit_at(mid, base_config, params, refine_candidates)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace magswitch
