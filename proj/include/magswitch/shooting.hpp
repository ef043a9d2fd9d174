// Copyright 2026 the magswitch authors
// SPDX-License-Identifier: Apache-2.0
//
// Shooting for time-optimal switching trajectories.  An extremal is fixed
// by its launch angle, so finding switching trajectories means scanning the
// circle of launch angles, watching which extremals reach the target ball
// around -e1, and refining the promising angles.  The scan objective is the
// switching time where a lane hits and a large constant plus the closest
// approach where it misses; golden-section refinement of its local minima
// walks miss valleys down into the (often very narrow) hit windows and then
// minimizes the switching time inside them.  Bisection on "does any angle
// hit" over the field intensity locates the detection threshold between the
// no-switching and switching regimes.

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "magswitch/batch.hpp"
#include "magswitch/dynamics.hpp"
#include "magswitch/errors.hpp"
#include "magswitch/params.hpp"

namespace magswitch {

struct ShootingConfig {
  double U = 1.0;            // field intensity
  int theta_grid_size = 64;  // launch angles per full turn, at least 8
  double t_max = 0.0;        // horizon; 0 derives one from U and the material
  double dt = 0.0;           // step; 0 derives the default resolving step
  double target_tol = 1e-4;  // hit when |m + e1| <= target_tol

  void validate() const;  // throws DomainError on out-of-range fields

  // Field values with the zero placeholders resolved.
  double resolved_dt(const MaterialParams& params) const;
  double resolved_t_max(const MaterialParams& params) const;
};

// One refined launch that reached the target ball.
struct ShootingHit {
  double theta = 0.0;           // launch angle
  double switching_time = 0.0;  // first time with |m + e1| <= target_tol
  Trajectory trajectory;        // thinned samples; the best hit keeps every step
};

// Closest approach of a grid launch that never reached the target ball.
struct MissRecord {
  double theta = 0.0;
  double closest = 2.0;
  double closest_time = 0.0;
};

struct BestHit {
  double theta = 0.0;
  double switching_time = 0.0;
  std::size_t hit_index = 0;  // position within ShootingResult::hits
};

struct ShootingResult {
  std::vector<ShootingHit> hits;         // refined hits, ascending launch angle
  std::optional<BestHit> best;           // minimal switching time among hits
  std::vector<MissRecord> miss_summary;  // grid lanes that missed, grid order
  std::string kernel;                    // batch kernel used
};

// Single launch: integrate one extremal and report the hit (with the
// in-step interpolated switching time) or the closest approach.  When
// `record_trajectory` is set, hits carry the path up to the switching time
// and misses the full horizon, thinned to roughly two thousand samples.
struct ShotRecord {
  double theta = 0.0;
  bool hit = false;
  double switching_time = 0.0;  // valid when hit
  double closest = 2.0;
  double closest_time = 0.0;
  Trajectory trajectory;  // empty unless record_trajectory was set
};

ShotRecord shoot_one(double launch_angle, const ShootingConfig& config,
                     const MaterialParams& params, bool record_trajectory = true);

// Full scan: batch-integrate the launch-angle grid, refine every local
// minimum of the scan objective by golden section, and collect the refined
// hits, the best hit, and the per-angle miss summary.  Deterministic: the
// same configuration always returns bit-identical results.
ShootingResult shoot_scan(const ShootingConfig& config, const MaterialParams& params);

// Refine near a seed angle: probe a 33-point subgrid spanning
// [seed - half_width, seed + half_width], then golden-section around the
// subgrid minimum.  Returns the refined launch, with trajectory.
ShotRecord refine_theta_near(double seed, double half_width, const ShootingConfig& config,
                             const MaterialParams& params);

// Detection threshold of the field intensity: bisection of "some launch
// angle hits" over [u_lo, u_hi].  Requires a miss at u_lo and a hit at
// u_hi; if u_lo itself already hits, the bracket has collapsed and u_lo is
// returned (materials with no barrier switch at every intensity).  A miss
// at u_hi raises DomainError.  Each iteration halves the bracket exactly;
// the result is the midpoint of the final bracket of width <= tol.
// `refine_candidates`, when positive, lets the hit predicate chase that
// many closest-approach valleys per intensity by golden section before
// declaring a miss — needed where the hit windows are narrower than the
// grid spacing.
double find_ucrit(const MaterialParams& params, double u_lo, double u_hi, double tol,
                  const ShootingConfig& base_config = ShootingConfig{},
                  int refine_candidates = 0);

}  // namespace magswitch
