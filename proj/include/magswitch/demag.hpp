// Copyright 2026 the magswitch authors
// SPDX-License-Identifier: Apache-2.0
//
// Demagnetizing tensor D = diag(gamma1, gamma2, gamma3) of a uniformly
// magnetized ellipsoid with semi-axes (a1, a2, a3):
//
//   gamma_i = (a1 a2 a3 / 2) * \int_0^inf ds / ((a_i^2+s) sqrt((a1^2+s)(a2^2+s)(a3^2+s)))
//
// computed two ways: adaptive quadrature (the ground truth) and the
// closed-form branches (triaxial via incomplete elliptic integrals, prolate,
// oblate, sphere).  Both return factors in the input axis order; use
// canonicalize() to sort ascending.

#pragma once

#include "magswitch/params.hpp"

namespace magswitch {

// Factors by adaptive Gauss-Kronrod quadrature after the substitution
// s = x/(1-x).  Absolute tolerance 1e-12 per factor; throws NumericalError
// with the achieved estimate if any factor's error estimate exceeds 1e-10.
DemagTensor demag_quadrature(const EllipsoidGeometry& geom);

// Closed-form factors.  Axes are sorted descending internally; axis ratios
// within 1e-8 of equality select the degenerate branch (sphere, prolate,
// oblate).  Results are mapped back to the input axis order.
DemagTensor demag_closed_form(const EllipsoidGeometry& geom);

}  // namespace magswitch
