// Copyright 2026 the magswitch authors
// SPDX-License-Identifier: Apache-2.0
//
// Equilibrium-classification tests: tangent Jacobians, spectra, and the
// zero-control simulation confirmations.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "magswitch/errors.hpp"
#include "magswitch/stability.hpp"
#include "magswitch/thresholds.hpp"

using namespace magswitch;

namespace {

const MaterialParams kTriax{0.6, 0.2, 0.5, 1.0};
const MaterialParams kSym{0.6, 0.1, 0.2, 0.2};

const EquilibriumReport& find(const std::vector<EquilibriumReport>& reports, int axis,
                              int sign) {
  for (const EquilibriumReport& r : reports) {
    if (r.axis == axis && r.sign == sign) return r;
  }
  REQUIRE(false);
  return reports.front();
}

}  // namespace

TEST_CASE("triaxial table: easy axis attracts, the other axes repel") {
  const auto reports = classify_equilibria(kTriax);
  REQUIRE(reports.size() == 6);

  const EquilibriumReport& e1 = find(reports, 1, +1);
  CHECK(e1.classification == EquilibriumClass::kAsymptoticallyStable);
  CHECK(e1.trace == doctest::Approx(-0.66).epsilon(1e-15));
  CHECK(e1.det == doctest::Approx(0.3264).epsilon(1e-15));

  // The linearization at +e1 is the same matrix the confinement bound uses.
  const StabilityMatrixData a = stability_matrix(kTriax);
  CHECK(e1.j11 == doctest::Approx(a.a11).epsilon(1e-15));
  CHECK(e1.j12 == doctest::Approx(a.a12).epsilon(1e-15));
  CHECK(e1.j21 == doctest::Approx(a.a21).epsilon(1e-15));
  CHECK(e1.j22 == doctest::Approx(a.a22).epsilon(1e-15));

  const EquilibriumReport& e2 = find(reports, 2, +1);
  CHECK(e2.classification == EquilibriumClass::kLinearlyUnstable);
  CHECK(e2.det == doctest::Approx(-0.204).epsilon(1e-15));
  CHECK(e2.det < 0.0);  // saddle

  const EquilibriumReport& e3 = find(reports, 3, +1);
  CHECK(e3.classification == EquilibriumClass::kLinearlyUnstable);
  CHECK(e3.trace == doctest::Approx(0.78).epsilon(1e-15));
  CHECK(e3.det == doctest::Approx(0.544).epsilon(1e-15));
  CHECK(e3.eig1.imag() != 0.0);  // fully repelling focus

  for (int axis = 1; axis <= 3; ++axis) {
    const EquilibriumReport& plus = find(reports, axis, +1);
    const EquilibriumReport& minus = find(reports, axis, -1);
    CHECK(minus.classification == plus.classification);
    CHECK(minus.trace == plus.trace);
    CHECK(minus.det == plus.det);
    CHECK(minus.eig1 == plus.eig1);
    // Genuine linearization at the antipode: off-diagonal signs flip.
    CHECK(minus.j12 == -plus.j12);
    CHECK(minus.j21 == -plus.j21);
    CHECK(minus.j11 == plus.j11);
    CHECK(minus.j22 == plus.j22);
  }
}

TEST_CASE("eigenvalues satisfy the trace and determinant identities") {
  const double alphas[] = {0.3, 0.6, 1.5};
  const double gammas[][3] = {{0.2, 0.5, 1.0}, {0.1, 0.2, 0.2}, {0.0, 0.4, 0.9},
                              {0.2, 0.2, 1.0}, {0.1, 0.6, 0.6}};
  for (double alpha : alphas) {
    for (const auto& g : gammas) {
      const MaterialParams p{alpha, g[0], g[1], g[2]};
      for (const EquilibriumReport& r : classify_equilibria(p)) {
        const std::complex<double> sum = r.eig1 + r.eig2;
        const std::complex<double> prod = r.eig1 * r.eig2;
        CHECK(std::abs(sum - std::complex<double>(r.trace, 0.0)) <= 1e-12);
        CHECK(std::abs(prod - std::complex<double>(r.det, 0.0)) <= 1e-12);
        CHECK(r.eig1.real() >= r.eig2.real());
      }
    }
  }
}

TEST_CASE("sphere: every equilibrium is marginal with a zero block") {
  for (const EquilibriumReport& r : classify_equilibria(MaterialParams{0.6, 0.3, 0.3, 0.3})) {
    CHECK(r.classification == EquilibriumClass::kMarginal);
    CHECK(r.j11 == 0.0);
    CHECK(r.j12 == 0.0);
    CHECK(r.j21 == 0.0);
    CHECK(r.j22 == 0.0);
  }
}

TEST_CASE("partially degenerate factors") {
  // Equal easy pair: the easy axis keeps a neutral direction and is only
  // marginal; so does the second axis; the hard axis still repels.
  const auto flat = classify_equilibria(MaterialParams{0.6, 0.2, 0.2, 1.0});
  CHECK(find(flat, 1, +1).classification == EquilibriumClass::kMarginal);
  CHECK(find(flat, 1, -1).classification == EquilibriumClass::kMarginal);
  CHECK(find(flat, 2, +1).classification == EquilibriumClass::kMarginal);
  CHECK(find(flat, 3, +1).classification == EquilibriumClass::kLinearlyUnstable);

  // Equal hard pair: a positive eigenvalue alongside a neutral one is still
  // decisive, so both hard axes classify as unstable.
  const auto sym = classify_equilibria(kSym);
  CHECK(find(sym, 1, +1).classification == EquilibriumClass::kAsymptoticallyStable);
  CHECK(find(sym, 2, +1).classification == EquilibriumClass::kLinearlyUnstable);
  CHECK(find(sym, 3, +1).classification == EquilibriumClass::kLinearlyUnstable);
  CHECK(find(sym, 2, +1).eig1.real() > 0.0);
  CHECK(std::abs(find(sym, 2, +1).eig2.real()) <= 1e-12);
}

TEST_CASE("exactly the easy pair is stable whenever gamma1 < gamma2 <= gamma3") {
  const double alphas[] = {0.3, 0.6, 1.5};
  const double gammas[][3] = {{0.2, 0.5, 1.0}, {0.1, 0.2, 0.2}, {0.0, 0.4, 0.9},
                              {0.1, 0.6, 0.6}, {0.05, 0.5, 0.95}};
  for (double alpha : alphas) {
    for (const auto& g : gammas) {
      const MaterialParams p{alpha, g[0], g[1], g[2]};
      int stable = 0;
      for (const EquilibriumReport& r : classify_equilibria(p)) {
        if (r.classification == EquilibriumClass::kAsymptoticallyStable) {
          ++stable;
          CHECK(r.axis == 1);
        }
      }
      CHECK(stable == 2);
    }
  }
}

TEST_CASE("classification table is shift invariant") {
  const auto base = classify_equilibria(MaterialParams{0.6, 0.0, 0.3, 0.8});
  const auto shifted = classify_equilibria(kTriax);  // same differences, +0.2
  REQUIRE(base.size() == shifted.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    CHECK(base[i].classification == shifted[i].classification);
    CHECK(std::abs(base[i].eig1 - shifted[i].eig1) <= 1e-12);
    CHECK(std::abs(base[i].eig2 - shifted[i].eig2) <= 1e-12);
  }
}

TEST_CASE("simulation confirms the stable pole, identically at both signs") {
  const auto reports = classify_equilibria(kTriax);
  const SimulationConfirmation plus = verify_by_simulation(find(reports, 1, +1), kTriax, 1e-3);
  CHECK(!plus.skipped);
  CHECK(plus.confirmed);
  CHECK(plus.detection_time > 0.0);
  CHECK(plus.detection_time < plus.horizon);
  CHECK(plus.extreme_distance == doctest::Approx(1e-4).epsilon(1e-15));

  // The rotation diag(-1, +/-1, -/+1) maps each +e1 run to the matching -e1
  // run exactly, operation by operation, so the numbers agree bitwise.
  const SimulationConfirmation minus =
      verify_by_simulation(find(reports, 1, -1), kTriax, 1e-3);
  CHECK(minus.confirmed);
  CHECK(minus.detection_time == plus.detection_time);
  CHECK(minus.extreme_distance == plus.extreme_distance);
}

TEST_CASE("simulation confirms the saddle and the repelling focus") {
  const auto reports = classify_equilibria(kTriax);
  for (int axis : {2, 3}) {
    const SimulationConfirmation c =
        verify_by_simulation(find(reports, axis, +1), kTriax, 1e-3);
    CHECK(!c.skipped);
    CHECK(c.confirmed);
    CHECK(c.detection_time > 0.0);
    CHECK(c.extreme_distance == doctest::Approx(1e-2).epsilon(1e-15));
  }
}

TEST_CASE("marginal reports are skipped, bad perturbations rejected") {
  const MaterialParams sphere{0.6, 0.3, 0.3, 0.3};
  const auto reports = classify_equilibria(sphere);
  const SimulationConfirmation c = verify_by_simulation(reports[0], sphere, 1e-3);
  CHECK(c.skipped);
  CHECK(!c.confirmed);

  const auto triax = classify_equilibria(kTriax);
  CHECK_THROWS_AS(verify_by_simulation(triax[0], kTriax, 2e-2), DomainError);
  CHECK_THROWS_AS(verify_by_simulation(triax[0], kTriax, 0.0), DomainError);
  CHECK_THROWS_AS(verify_by_simulation(triax[0], kTriax, -1e-3), DomainError);
}
