// Copyright 2026 the magswitch authors
// SPDX-License-Identifier: Apache-2.0
//
// Input data types shared across modules: ellipsoid geometry, the
// demagnetizing tensor, and the material parameters (damping alpha plus the
// three demagnetizing factors, sorted ascending).

#pragma once

#include <array>
#include <cmath>
#include <string>

#include "magswitch/errors.hpp"
#include "magswitch/vec3.hpp"

namespace magswitch {

// Semi-axes of the ellipsoidal sample, in any consistent unit.
struct EllipsoidGeometry {
  double a1 = 1.0;
  double a2 = 1.0;
  double a3 = 1.0;

  void validate() const {
    if (!(a1 > 0.0) || !(a2 > 0.0) || !(a3 > 0.0)) {
      throw DomainError("EllipsoidGeometry: all semi-axes must be positive");
    }
  }
};

// Demagnetizing factors in the *input axis order* (not sorted).
struct DemagTensor {
  double g1 = 1.0 / 3.0;
  double g2 = 1.0 / 3.0;
  double g3 = 1.0 / 3.0;

  constexpr double operator[](int i) const { return i == 0 ? g1 : (i == 1 ? g2 : g3); }
  constexpr double sum() const { return g1 + g2 + g3; }
};

// Result of sorting a DemagTensor ascending: sorted factors plus the
// permutation applied, so callers can map results back to physical axes.
// perm[k] is the input-axis index that landed in sorted slot k.
struct CanonicalDemag {
  DemagTensor sorted;
  std::array<int, 3> perm{0, 1, 2};
};

inline CanonicalDemag canonicalize(const DemagTensor& t) {
  CanonicalDemag c;
  std::array<int, 3> p{0, 1, 2};
  // Stable 3-element sort by factor value.
  if (t[p[0]] > t[p[1]]) std::swap(p[0], p[1]);
  if (t[p[1]] > t[p[2]]) std::swap(p[1], p[2]);
  if (t[p[0]] > t[p[1]]) std::swap(p[0], p[1]);
  c.perm = p;
  c.sorted = {t[p[0]], t[p[1]], t[p[2]]};
  return c;
}

// Damping coefficient and demagnetizing factors, gamma sorted ascending.
struct MaterialParams {
  double alpha = 0.6;
  double g1 = 0.0;
  double g2 = 0.0;
  double g3 = 0.0;

  Vec3 gamma() const { return {g1, g2, g3}; }
  // Differences that drive the linearized dynamics near +-e1.
  double dgm() const { return g2 - g1; }  // gamma_2 - gamma_1
  double dgp() const { return g3 - g1; }  // gamma_3 - gamma_1

  void validate() const {
    if (!(alpha > 0.0)) throw DomainError("MaterialParams: alpha must be positive");
    if (!(0.0 <= g1 && g1 <= g2 && g2 <= g3 && g3 <= 1.0)) {
      throw DomainError("MaterialParams: need 0 <= gamma1 <= gamma2 <= gamma3 <= 1");
    }
  }
};

// D m for D = diag(gamma).
inline Vec3 apply_demag(const MaterialParams& p, const Vec3& m) {
  return {p.g1 * m.x, p.g2 * m.y, p.g3 * m.z};
}

inline double sqrt1a2(const MaterialParams& p) { return std::sqrt(1.0 + p.alpha * p.alpha); }

}  // namespace magswitch
