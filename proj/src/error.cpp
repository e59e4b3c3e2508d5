// Copyright (c) extbell contributors.
// SPDX-License-Identifier: Apache-2.0
#include "extbell/error.hpp"

namespace extbell {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Input: return "input";
        case ErrorKind::Validation: return "validation";
        case ErrorKind::Signaling: return "signaling";
        case ErrorKind::Verification: return "verification";
        case ErrorKind::Empty: return "empty";
        case ErrorKind::Unbounded: return "unbounded";
        case ErrorKind::Resource: return "resource";
    }
    return "unknown";
}

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Verification: return 1;
        case ErrorKind::Resource: return 3;
        default: return 2;
    }
}

}  // namespace extbell
