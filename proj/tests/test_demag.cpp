// Copyright 2026 the magswitch authors
// SPDX-License-Identifier: Apache-2.0
//
// Demagnetizing-tensor tests.  High-precision reference values were
// produced by an independent 30-digit quadrature (tools/oracles) and are
// frozen here as literals.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "magswitch/demag.hpp"
#include "magswitch/elliptic.hpp"
#include "magswitch/errors.hpp"
#include "magswitch/quadrature.hpp"

using namespace magswitch;

namespace {
void check_close(double actual, double expected, double tol) {
  CAPTURE(actual);
  CAPTURE(expected);
  CAPTURE(tol);
  CHECK(std::abs(actual - expected) <= tol);
}
}  // namespace

TEST_CASE("quadrature factors match the high-precision reference") {
  // (2, 1, 0.5)
  DemagTensor t = demag_quadrature({2.0, 1.0, 0.5});
  check_close(t.g1, 0.112350441575503869, 1e-11);
  check_close(t.g2, 0.28478048169283695319, 1e-11);
  check_close(t.g3, 0.60286907673165917781, 1e-11);
  // (1, 0.75, 0.5)
  t = demag_quadrature({1.0, 0.75, 0.5});
  check_close(t.g1, 0.21126560531930369702, 1e-11);
  check_close(t.g2, 0.30500625786742145859, 1e-11);
  check_close(t.g3, 0.48372813681327484439, 1e-11);
  // (3, 2, 1)
  t = demag_quadrature({3.0, 2.0, 1.0});
  check_close(t.g1, 0.15630069882927098432, 1e-11);
  check_close(t.g2, 0.26715404026200451825, 1e-11);
  check_close(t.g3, 0.57654526090872449743, 1e-11);
}

TEST_CASE("sphere gives exactly one third per axis") {
  for (double a : {0.2, 1.0, 57.0}) {
    DemagTensor q = demag_quadrature({a, a, a});
    check_close(q.g1, 1.0 / 3.0, 1e-12);
    check_close(q.g2, 1.0 / 3.0, 1e-12);
    check_close(q.g3, 1.0 / 3.0, 1e-12);
    DemagTensor c = demag_closed_form({a, a, a});
    CHECK(c.g1 == 1.0 / 3.0);
    CHECK(c.g2 == 1.0 / 3.0);
    CHECK(c.g3 == 1.0 / 3.0);
  }
}

TEST_CASE("prolate spheroid: symmetry and reference values") {
  DemagTensor q = demag_quadrature({2.0, 1.0, 1.0});
  check_close(q.g2, q.g3, 1e-10);
  check_close(q.g2, 0.5 * (1.0 - q.g1), 1e-10);
  check_close(q.g1, 0.17356399753396423169, 1e-11);
  check_close(q.g2, 0.41321800123301788416, 1e-11);

  DemagTensor c = demag_closed_form({2.0, 1.0, 1.0});
  check_close(c.g1, q.g1, 1e-8);
  check_close(c.g2, q.g2, 1e-8);
  check_close(c.g3, q.g3, 1e-8);
}

TEST_CASE("oblate spheroid: symmetry and reference values") {
  DemagTensor q = demag_quadrature({1.0, 1.0, 0.5});
  check_close(q.g1, q.g2, 1e-10);
  check_close(q.g1, 0.5 * (1.0 - q.g3), 1e-10);
  check_close(q.g1, 0.23639985871871507791, 1e-11);
  check_close(q.g3, 0.52720028256256984418, 1e-11);

  DemagTensor c = demag_closed_form({1.0, 1.0, 0.5});
  check_close(c.g1, q.g1, 1e-8);
  check_close(c.g2, q.g2, 1e-8);
  check_close(c.g3, q.g3, 1e-8);
}

TEST_CASE("closed form agrees with quadrature on the triaxial grid") {
  const std::vector<EllipsoidGeometry> grid = {
      {1.0, 0.75, 0.5}, {1.0, 0.5, 0.25}, {1.0, 0.75, 0.25},
      {2.0, 1.0, 0.5},  {3.0, 2.0, 1.0},
  };
  for (const auto& g : grid) {
    DemagTensor q = demag_quadrature(g);
    DemagTensor c = demag_closed_form(g);
    for (int i = 0; i < 3; ++i) check_close(c[i], q[i], 1e-8);
  }
}

TEST_CASE("closed form handles permuted input axes") {
  // The factor follows its axis, whatever the input order.
  DemagTensor ref = demag_closed_form({2.0, 1.0, 0.5});
  DemagTensor perm = demag_closed_form({0.5, 2.0, 1.0});
  check_close(perm.g1, ref.g3, 1e-14);
  check_close(perm.g2, ref.g1, 1e-14);
  check_close(perm.g3, ref.g2, 1e-14);

  DemagTensor qref = demag_quadrature({2.0, 1.0, 0.5});
  DemagTensor qperm = demag_quadrature({0.5, 2.0, 1.0});
  check_close(qperm.g1, qref.g3, 1e-11);
  check_close(qperm.g2, qref.g1, 1e-11);
  check_close(qperm.g3, qref.g2, 1e-11);
}

TEST_CASE("near-degenerate axes select the degenerate branch") {
  // Within 1e-8 of equality the triaxial branch would divide by ~0; the
  // degenerate branch must kick in and stay accurate.
  DemagTensor c = demag_closed_form({1.0, 1.0 - 1e-9, 0.5});
  DemagTensor q = demag_quadrature({1.0, 1.0 - 1e-9, 0.5});
  for (int i = 0; i < 3; ++i) check_close(c[i], q[i], 1e-8);

  c = demag_closed_form({2.0, 1.0, 1.0 - 1e-9});
  q = demag_quadrature({2.0, 1.0, 1.0 - 1e-9});
  for (int i = 0; i < 3; ++i) check_close(c[i], q[i], 1e-8);

  c = demag_closed_form({1.0, 1.0 - 1e-9, 1.0 - 2e-9});
  check_close(c.g1, 1.0 / 3.0, 1e-8);
  check_close(c.g2, 1.0 / 3.0, 1e-8);
  check_close(c.g3, 1.0 / 3.0, 1e-8);
}

TEST_CASE("factors sum to one and lie in [0,1] across a geometry grid") {
  const double ratios[] = {0.25, 0.5, 0.75, 1.0};
  for (double r2 : ratios) {
    for (double r3 : ratios) {
      if (r3 > r2) continue;
      EllipsoidGeometry g{1.0, r2, r3};
      DemagTensor q = demag_quadrature(g);
      check_close(q.sum(), 1.0, 1e-10);
      for (int i = 0; i < 3; ++i) {
        CHECK(q[i] >= 0.0);
        CHECK(q[i] <= 1.0);
      }
      DemagTensor c = demag_closed_form(g);
      check_close(c.sum(), 1.0, 1e-10);
    }
  }
}

TEST_CASE("quadrature is scale invariant") {
  const EllipsoidGeometry base{2.0, 1.0, 0.5};
  DemagTensor ref = demag_quadrature(base);
  for (double s : {0.037, 2.0, 128.0, 1.0e4}) {
    DemagTensor t = demag_quadrature({s * base.a1, s * base.a2, s * base.a3});
    for (int i = 0; i < 3; ++i) check_close(t[i], ref[i], 1e-10);
  }
}

TEST_CASE("shrinking an axis increases its factor") {
  const double shrink[] = {0.9, 0.7, 0.5};
  const EllipsoidGeometry base{1.5, 1.0, 0.75};
  DemagTensor ref = demag_quadrature(base);
  for (double f : shrink) {
    CHECK(demag_quadrature({f * base.a1, base.a2, base.a3}).g1 > ref.g1);
    CHECK(demag_quadrature({base.a1, f * base.a2, base.a3}).g2 > ref.g2);
    CHECK(demag_quadrature({base.a1, base.a2, f * base.a3}).g3 > ref.g3);
  }
}

TEST_CASE("canonicalize sorts ascending and records the permutation") {
  DemagTensor t = demag_quadrature({0.5, 2.0, 1.0});  // g1 largest, g2 smallest
  CanonicalDemag c = canonicalize(t);
  CHECK(c.sorted.g1 <= c.sorted.g2);
  CHECK(c.sorted.g2 <= c.sorted.g3);
  CHECK(c.sorted.g1 >= 0.0);
  CHECK(c.sorted.g3 <= 1.0);
  for (int k = 0; k < 3; ++k) CHECK(c.sorted[k] == t[c.perm[k]]);
  CHECK(c.perm[0] == 1);  // longest axis (input slot 2) has the smallest factor
  CHECK(c.perm[1] == 2);
  CHECK(c.perm[2] == 0);
}

TEST_CASE("invalid geometry is rejected") {
  CHECK_THROWS_AS(demag_quadrature({0.0, 1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(demag_closed_form({1.0, -2.0, 1.0}), DomainError);
}

TEST_CASE("incomplete elliptic integral of the second kind") {
  // Empty integral.
  CHECK(incomplete_elliptic_E(0.0, 0.5) == 0.0);
  // p -> 0+ limit: integrand -> 1.
  check_close(incomplete_elliptic_E(1.25, 1e-14), 1.25, 1e-12);
  // Frozen 30-digit references.
  check_close(incomplete_elliptic_E(M_PI / 2.0, 0.5), 1.3506438810476755025, 1e-12);
  check_close(incomplete_elliptic_E(1.0, 0.8), 0.87800779069822490784, 1e-12);
  // Odd in x.
  check_close(incomplete_elliptic_E(-1.0, 0.8), -0.87800779069822490784, 1e-12);
  // Domain errors.
  CHECK_THROWS_AS(incomplete_elliptic_E(1.0, 0.0), DomainError);
  CHECK_THROWS_AS(incomplete_elliptic_E(1.0, 1.0), DomainError);
  CHECK_THROWS_AS(incomplete_elliptic_E(1.0, -0.5), DomainError);
  CHECK_THROWS_AS(incomplete_elliptic_E(1.0, 1.5), DomainError);
}

TEST_CASE("Carlson-form E matches the quadrature-form E") {
  for (double p : {0.1, 0.3, 0.5, 0.7, 0.9, 0.99}) {
    for (double phi : {0.1, 0.5, 1.0, 1.3, M_PI / 2.0}) {
      check_close(ellint_E_carlson(phi, p), incomplete_elliptic_E(phi, p), 1e-12);
    }
  }
}

TEST_CASE("adaptive quadrature reports non-convergence") {
  // A needle too sharp for the interval budget.
  const auto needle = [](double x) {
    const double d = x - 0.31830988618;
    return 1.0 / (1e-24 + d * d);
  };
  QuadResult r = integrate_adaptive_estimate(needle, 0.0, 1.0, 1e-12, 8);
  CHECK(!r.converged);
  CHECK_THROWS_AS(integrate_adaptive(needle, 0.0, 1.0, 1e-12, 8), NumericalError);
}
