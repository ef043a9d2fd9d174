// Copyright 2026 the magswitch authors
// SPDX-License-Identifier: Apache-2.0
//
// Landau-Lifshitz dynamics tests: right-hand-side identities, RK4 order and
// event location, flatness-based control reconstruction, the admissibility
// functional, and the constant-intensity feedback law.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "magswitch/dynamics.hpp"
#include "magswitch/errors.hpp"

using namespace magswitch;

namespace {

void check_close(double actual, double expected, double tol) {
  CAPTURE(actual);
  CAPTURE(expected);
  CAPTURE(tol);
  CHECK(std::abs(actual - expected) <= tol);
}

// Deterministic uniform double in [0, 1) from the minimal standard LCG
// (exactly specified by the standard, so results match across platforms).
double uniform01(std::minstd_rand& rng) {
  return static_cast<double>(rng() - std::minstd_rand::min()) /
         (static_cast<double>(std::minstd_rand::max() - std::minstd_rand::min()) + 1.0);
}

Vec3 random_in_ball(std::minstd_rand& rng) {
  for (;;) {
    const Vec3 v{2.0 * uniform01(rng) - 1.0, 2.0 * uniform01(rng) - 1.0,
                 2.0 * uniform01(rng) - 1.0};
    if (v.norm() <= 1.0 && v.norm() >= 0.05) return v;
  }
}

Vec3 random_unit(std::minstd_rand& rng) { return random_in_ball(rng).normalized(); }

const MaterialParams kTriax{0.6, 0.2, 0.5, 1.0};

// Cubic (Catmull-Rom) interpolation of control samples on a uniform grid,
// used to re-integrate reconstructed controls at full RK4 accuracy.
ControlLaw interpolated_control(const std::vector<double>& times, const std::vector<Vec3>& u) {
  const double t0 = times.front();
  const double h = times[1] - times[0];
  const int n = static_cast<int>(u.size());
  return [=](double t, const Vec3&) -> Vec3 {
    double x = (t - t0) / h;
    int i = static_cast<int>(std::floor(x));
    i = std::max(0, std::min(n - 2, i));
    const double s = x - i;
    const Vec3& p0 = u[std::max(0, i - 1)];
    const Vec3& p1 = u[i];
    const Vec3& p2 = u[i + 1];
    const Vec3& p3 = u[std::min(n - 1, i + 2)];
    const Vec3 a = p1 * 2.0;
    const Vec3 b = p2 - p0;
    const Vec3 c = p0 * 2.0 - p1 * 5.0 + p2 * 4.0 - p3;
    const Vec3 d = (p1 - p2) * 3.0 + p3 - p0;
    return (a + b * s + c * (s * s) + d * (s * s * s)) * 0.5;
  };
}

}  // namespace

TEST_CASE("equilibria of the uncontrolled flow") {
  CHECK(ll_rhs(kE1, {0, 0, 0}, kTriax).norm() == 0.0);
  CHECK(ll_rhs(kE2, {0, 0, 0}, kTriax).norm() == 0.0);
  CHECK(ll_rhs(kE3, {0, 0, 0}, kTriax).norm() == 0.0);
}

TEST_CASE("the two right-hand-side forms agree and are tangent") {
  std::minstd_rand rng(12345);
  for (int k = 0; k < 1000; ++k) {
    const Vec3 m = random_unit(rng);
    const Vec3 u = random_in_ball(rng);
    const Vec3 a = ll_rhs(m, u, kTriax);
    const Vec3 b = ll_rhs_cross_form(m, u, kTriax);
    CHECK((a - b).norm() <= 1e-13);
    CHECK(std::abs(dot(a, m)) <= 1e-12);
  }
}

TEST_CASE("zero control keeps the equilibrium and restores perturbations") {
  const ControlLaw zero = [](double, const Vec3&) { return Vec3{0, 0, 0}; };

  Trajectory at_eq = integrate(kE1, zero, kTriax, 1e-3, 1.0);
  CHECK(!at_eq.stopped);
  CHECK((at_eq.states.back() - kE1).norm() <= 1e-12);

  const Vec3 m0 = (kE1 + Vec3{0.0, 0.6e-3, 0.8e-3}).normalized();
  Trajectory tr = integrate(m0, zero, kTriax, 1e-3, 200.0, nullptr, 1000);
  const double d0 = (tr.states.front() - kE1).norm();
  const double dmid = (tr.states[tr.states.size() / 2] - kE1).norm();
  const double dend = (tr.states.back() - kE1).norm();
  CHECK(dmid < d0);
  CHECK(dend < dmid);
  CHECK(dend <= 1e-9);
}

TEST_CASE("RK4 endpoint error scales like dt^4") {
  const Vec3 u{0.3, 0.4, 0.5};
  const ControlLaw law = [&](double, const Vec3&) { return u; };
  const Vec3 m0 = Vec3{0.6, 0.64, 0.48}.normalized();
  const double T = 1.0;
  const Vec3 ref = integrate(m0, law, kTriax, 0.005 / 4.0, T).states.back();
  const Vec3 e1v = integrate(m0, law, kTriax, 0.02, T).states.back();
  const Vec3 e2v = integrate(m0, law, kTriax, 0.01, T).states.back();
  const double ratio = (e1v - ref).norm() / (e2v - ref).norm();
  CHECK(ratio > 16.0 * 0.7);
  CHECK(ratio < 16.0 * 1.3);
}

TEST_CASE("norm defect per step is fourth-order small") {
  const ControlLaw law = [](double t, const Vec3&) {
    return Vec3{0.5 * std::cos(3.0 * t), 0.5 * std::sin(3.0 * t), 0.2};
  };
  Trajectory tr = integrate(kE2, law, kTriax, 1e-3, 2.0);
  double worst = 0.0;
  for (double d : tr.norm_defect) worst = std::max(worst, d);
  CHECK(worst <= 1e-12);  // C dt^4 with mild C at dt = 1e-3
}

TEST_CASE("too large a step raises a step-size error") {
  const ControlLaw law = [](double, const Vec3&) { return Vec3{0.0, 0.0, 10.0}; };
  CHECK_THROWS_AS(integrate(kE1, law, kTriax, 10.0, 100.0), NumericalError);
}

TEST_CASE("stop events are located by interpolation between steps") {
  const MaterialParams iso{0.6, 0.0, 0.0, 0.0};  // no anisotropy
  const ControlLaw law = [](double, const Vec3&) { return Vec3{0.0, 0.0, 1.0}; };
  const StopEvent cross_half = [](double, const Vec3& m) { return 0.5 - m.z; };
  Trajectory fine = integrate(kE1, law, iso, 1e-5, 10.0, cross_half);
  Trajectory coarse = integrate(kE1, law, iso, 1e-3, 10.0, cross_half);
  REQUIRE(fine.stopped);
  REQUIRE(coarse.stopped);
  check_close(coarse.event_time, fine.event_time, 1e-5);
  check_close(coarse.states.back().z, 0.5, 1e-6);
  CHECK(coarse.times.back() == coarse.event_time);
}

TEST_CASE("an event already true at t=0 fires immediately") {
  const ControlLaw zero = [](double, const Vec3&) { return Vec3{0, 0, 0}; };
  const StopEvent g = [](double, const Vec3& m) { return -m.x; };
  Trajectory tr = integrate(kE1, zero, kTriax, 1e-3, 1.0, g);
  CHECK(tr.stopped);
  CHECK(tr.event_time == 0.0);
  CHECK(tr.times.size() == 1);
}

TEST_CASE("reconstructed control is orthogonal to m in the zero gauge") {
  // Analytic great-circle path, sampled uniformly.
  std::vector<double> times;
  std::vector<Vec3> states;
  const double h = 1e-3;
  for (int i = 0; i <= 2000; ++i) {
    const double t = h * i;
    times.push_back(t);
    states.push_back({std::cos(0.7 * t), std::sin(0.7 * t), 0.0});
  }
  const std::vector<Vec3> u = reconstruct_control(times, states, nullptr, kTriax);
  double worst = 0.0;
  for (size_t i = 0; i < u.size(); ++i) worst = std::max(worst, std::abs(dot(u[i], states[i])));
  CHECK(worst <= 1e-10);

  // A nonzero gauge shifts u by lambda m exactly.
  const std::vector<Vec3> u1 =
      reconstruct_control(times, states, [](double) { return 0.37; }, kTriax);
  worst = 0.0;
  for (size_t i = 0; i < u.size(); ++i) {
    worst = std::max(worst, (u1[i] - u[i] - states[i] * 0.37).norm());
  }
  CHECK(worst <= 1e-14);
}

TEST_CASE("reconstruction inverts the uncontrolled flow to zero") {
  const ControlLaw zero = [](double, const Vec3&) { return Vec3{0, 0, 0}; };
  const Vec3 m0 = Vec3{0.8, 0.5, 0.6}.normalized();
  Trajectory tr = integrate(m0, zero, kTriax, 1e-3, 3.0);
  const std::vector<Vec3> u = reconstruct_control(tr.times, tr.states, nullptr, kTriax);
  double worst = 0.0;
  for (const Vec3& ui : u) worst = std::max(worst, ui.norm());
  CHECK(worst <= 1e-9);
}

TEST_CASE("flatness round trip reproduces the stored trajectory") {
  const ControlLaw law = [](double t, const Vec3&) {
    return Vec3{0.4 * std::cos(2.0 * t), 0.4 * std::sin(2.0 * t), 0.25};
  };
  const Vec3 m0 = Vec3{0.9, 0.3, -0.3}.normalized();
  Trajectory tr = integrate(m0, law, kTriax, 1e-3, 2.5);
  const std::vector<Vec3> u = reconstruct_control(tr.times, tr.states, nullptr, kTriax);
  Trajectory back = integrate(m0, interpolated_control(tr.times, u), kTriax, 1e-3, 2.5);
  REQUIRE(back.states.size() == tr.states.size());
  double sup = 0.0;
  for (size_t i = 0; i < tr.states.size(); ++i) {
    sup = std::max(sup, (back.states[i] - tr.states[i]).norm());
  }
  CHECK(sup <= 1e-6);
}

TEST_CASE("admissibility functional on the slow planar circle") {
  // With equal first two factors the circle in the equator needs constant
  // intensity eps/sqrt(1+alpha^2), i.e. the functional is eps^2/(1+alpha^2).
  const MaterialParams sym{0.6, 0.3, 0.3, 1.0};
  const double eps = 0.05;
  std::vector<double> times;
  std::vector<Vec3> states;
  const double h = 1e-3;
  for (int i = 0; i <= 4000; ++i) {
    const double t = h * i;
    times.push_back(t);
    states.push_back({std::cos(eps * t), std::sin(eps * t), 0.0});
  }
  const double got = lambda_functional(times, states, sym);
  check_close(got, eps * eps / (1.0 + 0.36), 1e-12);

  // Pointwise form agrees at an analytic sample.
  const Vec3 m{std::cos(0.3), std::sin(0.3), 0.0};
  const Vec3 md = Vec3{-std::sin(0.3), std::cos(0.3), 0.0} * eps;
  check_close(admissibility_integrand(m, md, sym), eps * eps / 1.36, 1e-15);
}

TEST_CASE("with no anisotropy the functional scales with speed squared") {
  const MaterialParams none{0.6, 0.0, 0.0, 0.0};
  const Vec3 m{std::cos(0.3), std::sin(0.3), 0.0};
  const Vec3 e{-std::sin(0.3), std::cos(0.3), 0.0};
  const double f1 = admissibility_integrand(m, e * 0.2, none);
  const double f2 = admissibility_integrand(m, e * 0.4, none);
  check_close(f2 / f1, 4.0, 1e-12);
  check_close(f1, 0.04 / 1.36, 1e-15);
}

TEST_CASE("stagnation inside the path is reported with its sample") {
  std::vector<double> times;
  std::vector<Vec3> states;
  for (int i = 0; i <= 10; ++i) {
    times.push_back(0.1 * i);
    states.push_back(kE2);
  }
  CHECK_THROWS_WITH_AS(lambda_functional(times, states, kTriax),
                       doctest::Contains("sample 1"), NumericalError);
}

TEST_CASE("feedback control: closed form at e2, norm, and orthogonality") {
  const double U = 2.0;
  const double c = U / std::sqrt(1.36);
  const Vec3 at_e2 = feedback_control(kE2, U, kTriax);
  check_close(at_e2.x, -0.6 * c, 1e-14);
  check_close(at_e2.y, 0.0, 1e-14);
  check_close(at_e2.z, c, 1e-14);

  std::minstd_rand rng(777);
  for (int k = 0; k < 1000; ++k) {
    Vec3 m = random_unit(rng);
    if (std::abs(m.x) > 0.999) continue;
    const Vec3 u = feedback_control(m, U, kTriax);
    check_close(u.norm(), U, 1e-10);
    CHECK(std::abs(dot(u, m)) <= 1e-10);
  }

  CHECK_THROWS_AS(feedback_control(kE1, U, kTriax), DomainError);
  CHECK_THROWS_AS(feedback_control(Vec3{-1.0 + 1e-15, 0.0, 0.0}.normalized(), U, kTriax),
                  DomainError);
}

TEST_CASE("feedback loop reaches the target pole from nearby") {
  const double U = 1.0;
  const double delta = 0.1;
  const double a = 2.0 * std::asin(delta / 2.0);
  const Vec3 m0{-std::cos(a), std::sin(a), 0.0};
  const ControlLaw law = [&](double, const Vec3& m) { return feedback_control(m, U, kTriax); };
  const StopEvent reached = [](double, const Vec3& m) { return (m + kE1).norm() - 1e-4; };
  Trajectory tr = integrate(m0, law, kTriax, 1e-4, 1.0, reached);
  REQUIRE(tr.stopped);
  // The distance shrinks at rate at least U sqrt(1+alpha^2)/2 near the pole.
  CHECK(tr.event_time <= delta / (U * std::sqrt(1.36) / 2.0) + 0.05);
  CHECK((tr.states.back() + kE1).norm() <= 1.2e-4);
}

TEST_CASE("default time step tracks the fastest rate") {
  check_close(default_time_step(10.0, kTriax), 1e-4, 1e-18);
  // The rate floor of 1 dominates slow fields and mild anisotropy alike.
  check_close(default_time_step(0.1, kTriax), 1e-3, 1e-18);
  const MaterialParams tight{0.6, 0.0, 0.1, 0.2};
  check_close(default_time_step(0.1, tight), 1e-3, 1e-18);
}
