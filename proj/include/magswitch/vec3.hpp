// Copyright 2026 the magswitch authors
// SPDX-License-Identifier: Apache-2.0
//
// Minimal 3-vector arithmetic.  Everything in this toolkit lives on or near
// the unit sphere in R^3; this header provides the handful of exact
// operations the integrators and formulas need.  No SIMD here — the batched
// kernels carry their own lane-parallel versions of the same expressions.

#pragma once

#include <array>
#include <cmath>

namespace magswitch {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  constexpr Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr Vec3& operator*=(double s) {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }

  constexpr std::array<double, 3> to_array() const { return {x, y, z}; }

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  Vec3 normalized() const { return *this / norm(); }
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

constexpr double norm2(const Vec3& v) { return dot(v, v); }

inline double norm(const Vec3& v) { return std::sqrt(norm2(v)); }

inline Vec3 normalized(const Vec3& v) { return v / norm(v); }

// Componentwise product with a diagonal matrix diag(d.x, d.y, d.z).
constexpr Vec3 diag_mul(const Vec3& d, const Vec3& v) { return {d.x * v.x, d.y * v.y, d.z * v.z}; }

inline constexpr Vec3 kE1{1.0, 0.0, 0.0};
inline constexpr Vec3 kE2{0.0, 1.0, 0.0};
inline constexpr Vec3 kE3{0.0, 0.0, 1.0};

}  // namespace magswitch
