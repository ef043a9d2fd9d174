// Copyright 2026 the magswitch authors
// SPDX-License-Identifier: Apache-2.0
//
// Scalar reference instantiation of the batched extremal kernel: plain
// double arithmetic, one lane per block.  This is the portable baseline the
// AVX2 variant is tested against, and the path that handles remainder lanes
// when the batch size is not a multiple of the SIMD width.

#include "batch_impl.hpp"

namespace magswitch::detail {
namespace {

struct Pack1 {
  static constexpr int width = 1;
  using reg = double;
  static reg broadcast(double v) { return v; }
  static reg load(const double* p) { return *p; }
  static void store(double* p, reg v) { *p = v; }
  static reg sqrt(reg v) { return std::sqrt(v); }
};

}  // namespace

void run_block_scalar(const double* launch_angles, LaneResult* out, const BatchOptions& opt,
                      const MaterialParams& par) {
  run_block<Pack1>(launch_angles, out, opt, par);
}

}  // namespace magswitch::detail
