// Copyright 2026 the magswitch authors
// SPDX-License-Identifier: Apache-2.0
//
// Runtime kernel dispatch for the batched extremal integrator.  Full blocks
// of four lanes go to the AVX2 kernel when the CPU supports it; remainder
// lanes (and everything, when AVX2 is absent or disabled) go through the
// scalar kernel.  The two kernels agree bitwise, so the split is invisible
// in the results.

#include "magswitch/batch.hpp"

#include <cstdlib>
#include <string>

namespace magswitch {

namespace detail {
void run_block_scalar(const double* launch_angles, LaneResult* out, const BatchOptions& opt,
                      const MaterialParams& par);
void run_block_avx2(const double* launch_angles, LaneResult* out, const BatchOptions& opt,
                    const MaterialParams& par);
}  // namespace detail

void BatchOptions::validate() const {
  if (!(U > 0.0)) throw DomainError("BatchOptions: U must be positive");
  if (!(dt > 0.0)) throw DomainError("BatchOptions: dt must be positive");
  if (!(t_max > 0.0)) throw DomainError("BatchOptions: t_max must be positive");
  if (!(target_tol > 0.0) || !(target_tol <= 0.1)) {
    throw DomainError("BatchOptions: target_tol must lie in (0, 0.1]");
  }
}

std::string batch_kernel_name() {
  const char* forced = std::getenv("MAGSWITCH_SIMD");
  if (forced != nullptr && forced[0] != '\0') {
    const std::string want(forced);
    if (want == "scalar") return "scalar";
    if (want == "avx2") {
      if (!__builtin_cpu_supports("avx2")) {
        throw DomainError("MAGSWITCH_SIMD=avx2 requested but the CPU lacks AVX2");
      }
      return "avx2";
    }
    throw DomainError("MAGSWITCH_SIMD: unknown kernel '" + want + "' (expected scalar or avx2)");
  }
  return __builtin_cpu_supports("avx2") ? "avx2" : "scalar";
}

BatchResult batch_shoot(const std::vector<double>& launch_angles, const BatchOptions& options,
                        const MaterialParams& params) {
  params.validate();
  options.validate();

  BatchResult res;
  res.kernel = batch_kernel_name();
  const std::size_t n = launch_angles.size();
  res.lanes.resize(n);
  const bool wide = (res.kernel == "avx2");

  std::size_t i = 0;
  while (i < n) {
    std::size_t block = 1;
    if (wide && i + 4 <= n) {
      detail::run_block_avx2(&launch_angles[i], &res.lanes[i], options, params);
      block = 4;
    } else {
      detail::run_block_scalar(&launch_angles[i], &res.lanes[i], options, params);
    }
    i += block;
    if (options.stop == BatchStop::kAnyHit) {
      bool found = false;
      for (std::size_t k = i - block; k < i; ++k) found = found || res.lanes[k].hit;
      if (found) break;
    }
  }
  for (; i < n; ++i) {
    res.lanes[i].theta = launch_angles[i];
    res.lanes[i].skipped = true;
  }
  return res;
}

}  // namespace magswitch
