// Copyright 2026 the magswitch authors
// SPDX-License-Identifier: Apache-2.0
//
// AVX2 instantiation of the batched extremal kernel: four lanes per block,
// one trajectory per 64-bit lane of a 256-bit register.  This translation
// unit — and only this one — is compiled with -mavx2; the dispatcher calls
// it after probing the CPU.  All operations are vertical (addition,
// subtraction, multiplication, division, square root), each correctly
// rounded per lane, so the results match the scalar kernel bit for bit.

#include <immintrin.h>

#include "batch_impl.hpp"

namespace magswitch::detail {
namespace {

struct Pack4 {
  static constexpr int width = 4;
  using reg = __m256d;
  static reg broadcast(double v) { return _mm256_set1_pd(v); }
  static reg load(const double* p) { return _mm256_loadu_pd(p); }
  static void store(double* p, reg v) { _mm256_storeu_pd(p, v); }
  static reg sqrt(reg v) { return _mm256_sqrt_pd(v); }
};

}  // namespace

void run_block_avx2(const double* launch_angles, LaneResult* out, const BatchOptions& opt,
                    const MaterialParams& par) {
  run_block<Pack4>(launch_angles, out, opt, par);
}

}  // namespace magswitch::detail
