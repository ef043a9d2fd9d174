// Copyright 2026 the magswitch authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "magswitch/shooting.hpp"
#include "magswitch/thresholds.hpp"

namespace {

using namespace magswitch;

const MaterialParams kTriax{0.6, 0.2, 0.5, 1.0};
const MaterialParams kSym{0.6, 0.1, 0.2, 0.2};
const MaterialParams kSphere{0.6, 0.3, 0.3, 0.3};

// Independently computed minimal-time needle table for the triaxial
// material: launch angle and switching time of the fastest extremal at
// each intensity.
struct NeedleRow {
  double U;
  double t_max;
  double theta;
  double time;
};
const NeedleRow kNeedles[] = {
    {3.0, 5.0, 2.2507634, 0.8606278},
    {5.0, 2.0, 2.2913838, 0.524834413},
    {10.0, 1.0, 2.3233343, 0.265803501},
    {20.0, 0.5, 2.3384409, 0.133786353},
};

double cyclic_gap(double a, double b) {
  double d = std::abs(a - b);
  return std::min(d, std::abs(2.0 * M_PI - d));
}

// The needle family repeats under a half-turn of the launch circle, so a
// scan may legitimately report either copy.
double needle_gap(double theta, double reference) {
  return std::min(cyclic_gap(theta, reference), cyclic_gap(theta, reference + M_PI));
}

void check_hit_invariants(const ShootingHit& hit, const ShootingConfig& config) {
  const Trajectory& tr = hit.trajectory;
  REQUIRE(!tr.times.empty());
  CHECK(tr.stopped);
  CHECK(tr.event_time == hit.switching_time);
  CHECK(tr.times.front() == 0.0);
  // The detector lands on the tolerance sphere by in-step interpolation;
  // its model error is bounded well below 0.2% of the tolerance.
  CHECK((tr.states.back() + kE1).norm() <= 1.002 * config.target_tol);
  for (double h : tr.ham_defect) CHECK(std::abs(h) <= 1e-4);
  for (const Vec3& u : tr.controls) CHECK(std::abs(u.norm() - config.U) <= 1e-8);
}

}  // namespace

TEST_CASE("triaxial scan finds the needle table at moderate intensity") {
  ShootingConfig config;
  config.U = 3.0;
  config.t_max = 5.0;
  const ShootingResult result = shoot_scan(config, kTriax);

  REQUIRE(result.best.has_value());
  CHECK(needle_gap(result.best->theta, 2.2507634) < 2e-3);
  CHECK(result.best->switching_time ==
        doctest::Approx(0.8606278).epsilon(1e-4));

  // The slower needle of the same intensity appears among the hits.
  bool found_second = false;
  for (const ShootingHit& hit : result.hits) {
    if (needle_gap(hit.theta, 0.6556966) < 2e-3) {
      CHECK(hit.switching_time == doctest::Approx(0.9426563).epsilon(1e-4));
      found_second = true;
    }
  }
  CHECK(found_second);

  // Structural invariants of the scan result.
  REQUIRE(!result.hits.empty());
  CHECK(result.best->hit_index < result.hits.size());
  CHECK(result.hits[result.best->hit_index].switching_time == result.best->switching_time);
  for (std::size_t i = 0; i + 1 < result.hits.size(); ++i) {
    CHECK(result.hits[i].theta < result.hits[i + 1].theta);
  }
  for (const ShootingHit& hit : result.hits) {
    CHECK(result.best->switching_time <= hit.switching_time);
    check_hit_invariants(hit, config);
  }
  for (std::size_t i = 0; i + 1 < result.miss_summary.size(); ++i) {
    CHECK(result.miss_summary[i].theta < result.miss_summary[i + 1].theta);
  }
  for (const MissRecord& miss : result.miss_summary) {
    CHECK(miss.closest > config.target_tol);
    CHECK(miss.closest_time >= 0.0);
    CHECK(miss.closest_time <= config.t_max);
  }
}

TEST_CASE("symmetric scans collapse to one needle and match the closed form") {
  SUBCASE("uniaxial material") {
    ShootingConfig config;
    config.U = 0.3;
    const ShootingResult result = shoot_scan(config, kSym);
    REQUIRE(result.best.has_value());
    CHECK(result.hits.size() == 1);
    const double closed = minimal_time_symmetric(0.3, kSym);
    CHECK(result.best->switching_time == doctest::Approx(closed).epsilon(5e-3));
  }
  SUBCASE("sphere") {
    ShootingConfig config;
    config.U = 1.0;
    const ShootingResult result = shoot_scan(config, kSphere);
    REQUIRE(result.best.has_value());
    CHECK(result.hits.size() == 1);
    const double closed = minimal_time_symmetric(1.0, kSphere);
    CHECK(result.best->switching_time == doctest::Approx(closed).epsilon(5e-3));
  }
  SUBCASE("near the critical intensity") {
    const MaterialParams soft{1.0, 0.0, 0.8, 0.8};
    const double uc = 0.2828427124746190;  // alpha*(g2-g1)/(2*sqrt(1+alpha^2))
    ShootingConfig config;
    config.U = uc + 1e-2;
    config.t_max = 60.0;
    const ShootingResult result = shoot_scan(config, soft);
    REQUIRE(result.best.has_value());
    const double closed = minimal_time_symmetric(config.U, soft);
    CHECK(result.best->switching_time == doctest::Approx(closed).epsilon(1e-2));
  }
}

TEST_CASE("switching times decrease with intensity along the needle family") {
  double previous = 0.0;
  for (const NeedleRow& row : kNeedles) {
    ShootingConfig config;
    config.U = row.U;
    config.t_max = row.t_max;
    config.theta_grid_size = 128;  // resolves the narrow high-intensity windows
    const ShootingResult result = shoot_scan(config, kTriax);
    REQUIRE(result.best.has_value());
    CHECK(result.best->switching_time == doctest::Approx(row.time).epsilon(1e-4));
    if (previous > 0.0) CHECK(result.best->switching_time <= previous * 1.01);
    previous = result.best->switching_time;
  }
}

TEST_CASE("find_ucrit brackets the uniaxial threshold") {
  ShootingConfig base;
  base.theta_grid_size = 8;  // every launch angle is equivalent by symmetry
  base.t_max = 520.0;        // long horizon: near-critical needles are slow
  const double uc = find_ucrit(kSym, 0.02, 0.04, 1e-3, base);
  CHECK(uc == doctest::Approx(0.025724787771376326).epsilon(0.05));
}

TEST_CASE("find_ucrit is grid-independent beyond the default resolution") {
  const MaterialParams soft{1.0, 0.0, 0.8, 0.8};
  const double oracle = 0.2828427124746190;
  ShootingConfig base;
  base.t_max = 60.0;
  base.theta_grid_size = 64;
  const double r64 = find_ucrit(soft, 0.2, 0.45, 5e-3, base);
  base.theta_grid_size = 96;
  const double r96 = find_ucrit(soft, 0.2, 0.45, 5e-3, base);
  CHECK(std::abs(r64 - r96) <= 2.0 * 5e-3);
  CHECK(r64 == doctest::Approx(oracle).epsilon(0.05));
  CHECK(r96 == doctest::Approx(oracle).epsilon(0.05));
}

TEST_CASE("find_ucrit collapses to the lower edge for barrier-free materials") {
  ShootingConfig base;
  base.theta_grid_size = 8;
  base.t_max = 100.0;
  const double uc = find_ucrit(kSphere, 0.05, 1.0, 1e-3, base);
  CHECK(uc == 0.05);
}

TEST_CASE("find_ucrit rejects invalid setups") {
  ShootingConfig base;
  base.theta_grid_size = 8;
  base.t_max = 50.0;
  CHECK_THROWS_AS(find_ucrit(kSym, 0.0, 0.1, 1e-3, base), DomainError);
  CHECK_THROWS_AS(find_ucrit(kSym, 0.2, 0.1, 1e-3, base), DomainError);
  CHECK_THROWS_AS(find_ucrit(kSym, 0.02, 0.04, 0.0, base), DomainError);
  // Both bracket edges below the threshold: no switching anywhere.
  CHECK_THROWS_AS(find_ucrit(kSym, 0.001, 0.002, 1e-3, base), DomainError);
}

TEST_CASE("single shots report hits and misses faithfully") {
  SUBCASE("hit") {
    ShootingConfig config;
    config.U = 3.0;
    config.t_max = 5.0;
    const ShotRecord record = shoot_one(2.2507634, config, kTriax);
    CHECK(record.hit);
    CHECK(record.theta == 2.2507634);
    CHECK(record.switching_time == doctest::Approx(0.8606278).epsilon(1e-4));
    REQUIRE(!record.trajectory.times.empty());
    CHECK(record.trajectory.stopped);
    CHECK(record.trajectory.event_time == record.switching_time);
    CHECK((record.trajectory.states.back() + kE1).norm() <= 1.002 * config.target_tol);
    CHECK(record.trajectory.times.size() <= 2600);  // thinned recording
  }
  SUBCASE("miss") {
    ShootingConfig config;
    config.U = 0.1;
    config.t_max = 30.0;
    const ShotRecord record = shoot_one(0.8976, config, kTriax);
    CHECK(!record.hit);
    CHECK(record.closest > 0.5);  // stays far from the antipode below threshold
    CHECK(record.closest_time >= 0.0);
    CHECK(record.closest_time <= config.t_max);
    REQUIRE(!record.trajectory.times.empty());
    CHECK(!record.trajectory.stopped);
  }
  SUBCASE("trajectory recording can be disabled") {
    ShootingConfig config;
    config.U = 3.0;
    config.t_max = 5.0;
    const ShotRecord record = shoot_one(2.2507634, config, kTriax, false);
    CHECK(record.hit);
    CHECK(record.trajectory.times.empty());
  }
}

TEST_CASE("seeded refinement hones the fast needles") {
  SUBCASE("strong intensity") {
    ShootingConfig config;
    config.U = 10.0;
    config.t_max = 1.0;
    const ShotRecord record = refine_theta_near(2.3233, 0.05, config, kTriax);
    CHECK(record.hit);
    CHECK(record.switching_time == doctest::Approx(0.265803501).epsilon(1e-4));
    CHECK(needle_gap(record.theta, 2.3233343) < 2e-3);
  }
  SUBCASE("strongest intensity") {
    ShootingConfig config;
    config.U = 20.0;
    config.t_max = 0.5;
    const ShotRecord record = refine_theta_near(2.3384409, 0.05, config, kTriax);
    CHECK(record.hit);
    CHECK(record.switching_time == doctest::Approx(0.133786353).epsilon(1e-4));
  }
  SUBCASE("half width is validated") {
    ShootingConfig config;
    CHECK_THROWS_AS(refine_theta_near(1.0, 0.0, config, kTriax), DomainError);
    CHECK_THROWS_AS(refine_theta_near(1.0, 4.0, config, kTriax), DomainError);
  }
}

TEST_CASE("scan configuration is validated") {
  const auto scan_with = [](auto mutate) {
    ShootingConfig config;
    mutate(config);
    return shoot_scan(config, kTriax);
  };
  CHECK_THROWS_AS(scan_with([](ShootingConfig& c) { c.U = 0.0; }), DomainError);
  CHECK_THROWS_AS(scan_with([](ShootingConfig& c) { c.U = -1.0; }), DomainError);
  CHECK_THROWS_AS(scan_with([](ShootingConfig& c) { c.theta_grid_size = 4; }), DomainError);
  CHECK_THROWS_AS(scan_with([](ShootingConfig& c) { c.target_tol = 0.0; }), DomainError);
  CHECK_THROWS_AS(scan_with([](ShootingConfig& c) { c.target_tol = 0.5; }), DomainError);
  CHECK_THROWS_AS(scan_with([](ShootingConfig& c) { c.t_max = -1.0; }), DomainError);
  CHECK_THROWS_AS(scan_with([](ShootingConfig& c) { c.dt = -1e-3; }), DomainError);

  ShootingConfig config;
  config.U = 3.0;
  CHECK(config.resolved_dt(kTriax) == 1e-3 / 3.0);
  CHECK(config.resolved_t_max(kTriax) > 0.0);
  config.dt = 1e-2;
  config.t_max = 7.0;
  CHECK(config.resolved_dt(kTriax) == 1e-2);
  CHECK(config.resolved_t_max(kTriax) == 7.0);
}

TEST_CASE("scans are deterministic") {
  ShootingConfig config;
  config.U = 3.0;
  config.t_max = 5.0;
  const ShootingResult a = shoot_scan(config, kTriax);
  const ShootingResult b = shoot_scan(config, kTriax);
  REQUIRE(a.best.has_value());
  REQUIRE(b.best.has_value());
  CHECK(a.best->theta == b.best->theta);
  CHECK(a.best->switching_time == b.best->switching_time);
  REQUIRE(a.hits.size() == b.hits.size());
  for (std::size_t i = 0; i < a.hits.size(); ++i) {
    CHECK(a.hits[i].theta == b.hits[i].theta);
    CHECK(a.hits[i].switching_time == b.hits[i].switching_time);
  }
  REQUIRE(a.miss_summary.size() == b.miss_summary.size());
  for (std::size_t i = 0; i < a.miss_summary.size(); ++i) {
    CHECK(a.miss_summary[i].theta == b.miss_summary[i].theta);
    CHECK(a.miss_summary[i].closest == b.miss_summary[i].closest);
  }
  CHECK(a.kernel == batch_kernel_name());
}
