// Copyright (c) extbell contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

#include "extbell/rational.hpp"

namespace extbell {

/// Dense row-major matrix of rationals; rows may be appended freely.
using RMatrix = std::vector<RVector>;

/// Reduced row echelon form, computed in place on a copy.
struct RowEchelon {
    RMatrix rows;                       // the non-zero rows of the RREF
    std::vector<std::size_t> pivots;    // pivot column of each row
    std::size_t cols = 0;

    std::size_t rank() const { return pivots.size(); }
};

RowEchelon rref(RMatrix m, std::size_t cols);

std::size_t rank(const RMatrix& m, std::size_t cols);

/// Basis of {z : M z = 0}, one vector per non-pivot column (z_j = 1 there).
RMatrix nullspace(const RMatrix& m, std::size_t cols);

/// Solves M x = rhs. Returns false when inconsistent; otherwise x is the
/// particular solution with all free variables set to zero.
bool solve_particular(const RMatrix& m, const RVector& rhs, std::size_t cols, RVector& x);

}  // namespace extbell
