// Copyright 2026 the magswitch authors
// SPDX-License-Identifier: Apache-2.0
//
// Plot-ready CSV emission for sampled trajectories: '.' decimal separator,
// '\n' line endings, 15 significant digits per value.  Two layouts:
//
//   dynamics:  t,m1,m2,m3,u1,u2,u3,norm_defect
//   extremal:  t,m1,m2,m3,psi1,psi2,psi3,u1,u2,u3,H_defect
//
// The extremal layout requires the costate and Hamiltonian-defect columns
// that only the extremal-flow integrator records.

#pragma once

#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>

#include "magswitch/dynamics.hpp"
#include "magswitch/errors.hpp"

namespace magswitch {

namespace detail {

inline void append_value(std::string& line, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  line += buf;
}

inline void append_vec(std::string& line, const Vec3& v) {
  append_value(line, v.x);
  line += ',';
  append_value(line, v.y);
  line += ',';
  append_value(line, v.z);
}

}  // namespace detail

inline void write_dynamics_csv(std::ostream& os, const Trajectory& traj) {
  os << "t,m1,m2,m3,u1,u2,u3,norm_defect\n";
  std::string line;
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    line.clear();
    detail::append_value(line, traj.times[i]);
    line += ',';
    detail::append_vec(line, traj.states[i]);
    line += ',';
    detail::append_vec(line, traj.controls[i]);
    line += ',';
    detail::append_value(line, traj.norm_defect[i]);
    line += '\n';
    os << line;
  }
}

inline void write_extremal_csv(std::ostream& os, const Trajectory& traj) {
  if (traj.costates.size() != traj.times.size() || traj.ham_defect.size() != traj.times.size()) {
    throw DomainError("write_extremal_csv: trajectory lacks costate samples");
  }
  os << "t,m1,m2,m3,psi1,psi2,psi3,u1,u2,u3,H_defect\n";
  std::string line;
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    line.clear();
    detail::append_value(line, traj.times[i]);
    line += ',';
    detail::append_vec(line, traj.states[i]);
    line += ',';
    detail::append_vec(line, traj.costates[i]);
    line += ',';
    detail::append_vec(line, traj.controls[i]);
    line += ',';
    detail::append_value(line, traj.ham_defect[i]);
    line += '\n';
    os << line;
  }
}

template <typename Writer>
void save_csv(const std::string& path, Writer&& writer) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DomainError("cannot open CSV output file: " + path);
  writer(os);
  os.flush();
  if (!os) throw DomainError("failed writing CSV output file: " + path);
}

}  // namespace magswitch
