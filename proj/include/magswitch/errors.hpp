// Copyright 2026 the magswitch authors
// SPDX-License-Identifier: Apache-2.0
//
// Error taxonomy shared by every module.  A DomainError means the caller
// handed us inputs outside an operation's contract (bad geometry, invalid
// bracket, a formula applied outside its regime) and maps to process exit
// code 2 in the CLI.  A NumericalError means the inputs were legal but a
// numerical procedure could not meet its accuracy contract (quadrature
// non-convergence, step size too large) and maps to exit code 3.

#pragma once

#include <stdexcept>
#include <string>

namespace magswitch {

class DomainError : public std::invalid_argument {
public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// CLI exit codes (0 = success).
inline constexpr int kExitDomainError = 2;
inline constexpr int kExitNumericalError = 3;

}  // namespace magswitch
