// Copyright (c) extbell contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace extbell {

enum class ErrorKind {
    Input,         // malformed file, unknown label, bad flag value
    Validation,    // a domain invariant is violated (scenario, behaviour, model)
    Signaling,     // a marginal was requested under "require-NS" and does not exist
    Verification,  // a certificate or an expected result failed to check
    Empty,         // polytope or LP feasible region is empty
    Unbounded,     // polyhedron or LP objective is unbounded
    Resource,      // configured resource cap exceeded
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

/// Process exit code for an error category: 1 verification, 2 input, 3 resource.
int exit_code_for(ErrorKind kind);

}  // namespace extbell
