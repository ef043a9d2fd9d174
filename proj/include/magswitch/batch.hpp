// Copyright 2026 the magswitch authors
// SPDX-License-Identifier: Apache-2.0
//
// Batched integration of the extremal flow: one lane per launch angle.
// A shooting scan integrates many extremals over the same uniform time
// grid; the lanes never interact, so the integrator advances them in
// lockstep with lane-parallel arithmetic.  Two kernels implement the
// identical expression sequence — a scalar reference and an AVX2 variant —
// selected at runtime by CPU probe (override with MAGSWITCH_SIMD=scalar or
// MAGSWITCH_SIMD=avx2).  Every lane operation is vertical and the build
// forbids FP contraction, so the kernels agree bit for bit; the equivalence
// tests assert exact equality.
//
// Each lane watches the distance |m + e1| to the target pole.  A lane hits
// when the distance first reaches the target tolerance; the crossing time
// is located inside the step — linearly in the distance when the step ends
// inside the tolerance, by a quadratic model of the squared distance when
// the distance dips through the tolerance and recovers within a single
// step — and the state there is recovered by a partial step.  Lanes that
// never reach the tolerance report their closest approach instead.

#pragma once

#include <string>
#include <vector>

#include "magswitch/errors.hpp"
#include "magswitch/extremal.hpp"
#include "magswitch/params.hpp"

namespace magswitch {

enum class BatchStop {
  kAllDone,  // advance every lane to a hit or to t_max
  kAnyHit,   // return after the first block that contains a hit
};

struct BatchOptions {
  double U = 1.0;            // field intensity
  double dt = 0.0;           // integration step, required > 0
  double t_max = 0.0;        // time horizon, required > 0
  double target_tol = 1e-4;  // hit when |m + e1| <= target_tol
  BatchStop stop = BatchStop::kAllDone;

  void validate() const;  // throws DomainError on out-of-range fields
};

// Outcome of one lane (one launch angle).
struct LaneResult {
  double theta = 0.0;         // launch angle of this lane
  bool hit = false;           // reached |m + e1| <= target_tol
  bool diverged = false;      // one-step norm defect exceeded 1e-3; frozen as a miss
  bool skipped = false;       // never run (kAnyHit stopped an earlier block)
  double hit_time = 0.0;      // interpolated first crossing time (hit lanes)
  ExtremalState hit_state;    // state at hit_time (hit lanes)
  double closest = 2.0;       // smallest |m + e1| encountered
  double closest_time = 0.0;  // time of the closest approach
};

struct BatchResult {
  std::vector<LaneResult> lanes;  // one per launch angle, in input order
  std::string kernel;             // kernel used for full-width blocks
};

// Integrate one extremal per launch angle over a shared uniform time grid.
// Hits record the in-step interpolated crossing of |m + e1| = target_tol
// (including dips that recover within one step, which a step-endpoint event
// test would miss); misses record their closest approach.  Lanes whose
// launch angles survive to the same block boundary are deterministic and
// bit-identical across the scalar and AVX2 kernels.
BatchResult batch_shoot(const std::vector<double>& launch_angles, const BatchOptions& options,
                        const MaterialParams& params);

// Kernel the dispatcher would select right now: "avx2" when the CPU
// supports it, else "scalar".  The MAGSWITCH_SIMD environment variable
// (value "scalar" or "avx2") overrides the probe; forcing "avx2" on a CPU
// without it, or any other value, raises DomainError.
std::string batch_kernel_name();

}  // namespace magswitch
