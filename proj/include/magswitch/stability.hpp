// Copyright 2026 the magswitch authors
// SPDX-License-Identifier: Apache-2.0
//
// Linear stability of the six coordinate equilibria +-e1, +-e2, +-e3 of the
// uncontrolled damped-precession flow.  At s*e_i (s = +-1, cyclic tangent
// pair (e_j, e_k)) the sphere constraint leaves a 2x2 tangent linearization
//
//   J = [[alpha (g_i - g_j),  s (g_i - g_k)],
//        [-s (g_i - g_j),     alpha (g_i - g_k)]],
//
// whose normal coordinate vanishes at second order.  det J =
// (1 + alpha^2)(g_i - g_j)(g_i - g_k), so for g1 < g2 <= g3 exactly the pair
// +-e1 is asymptotically stable; -e_k has the off-diagonal signs of +e_k
// flipped and the same spectrum (diag(1,-1) similarity).

#pragma once

#include <complex>
#include <vector>

#include "magswitch/params.hpp"
#include "magswitch/vec3.hpp"

namespace magswitch {

enum class EquilibriumClass {
  kAsymptoticallyStable,  // both real parts negative
  kLinearlyUnstable,      // some real part positive
  kMarginal,              // largest real part zero: no linear verdict
};

const char* to_string(EquilibriumClass c);

struct EquilibriumReport {
  int axis = 1;                   // 1, 2, or 3
  int sign = +1;                  // +1 or -1
  Vec3 point;                     // sign * e_axis
  double j11 = 0.0, j12 = 0.0;    // tangent Jacobian in the (e_j, e_k) basis
  double j21 = 0.0, j22 = 0.0;
  double trace = 0.0;
  double det = 0.0;
  std::complex<double> eig1;      // eigenvalue with the larger real part
  std::complex<double> eig2;
  EquilibriumClass classification = EquilibriumClass::kMarginal;
};

// Reports for +e1, -e1, +e2, -e2, +e3, -e3 in that order.  A real part
// within 1e-12 of zero counts as zero; a positive real part wins over a
// zero one (an unstable direction is decisive regardless of a neutral one).
std::vector<EquilibriumReport> classify_equilibria(const MaterialParams& params);

// Zero-control integration check of one report.  Asymptotically stable:
// perturb along each tangent axis and require the distance to the
// equilibrium to drop below perturbation/10 within 50/(alpha * smallest
// positive factor gap).  Linearly unstable: perturb along the unstable
// eigendirection (any tangent direction when the whole spectrum lies in the
// right half-plane) and require the distance to exceed 10 * perturbation.
// Marginal reports are skipped -- no decisive numerical test exists.
struct SimulationConfirmation {
  bool skipped = false;
  bool confirmed = false;
  double horizon = 0.0;           // integration budget actually allowed
  double detection_time = 0.0;    // when the criterion fired (slowest run)
  double extreme_distance = 0.0;  // min (stable) or max (unstable) distance
};

// Requires 0 < perturbation <= 1e-2.
SimulationConfirmation verify_by_simulation(const EquilibriumReport& report,
                                            const MaterialParams& params,
                                            double perturbation);

}  // namespace magswitch
