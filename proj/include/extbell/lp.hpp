// Copyright (c) extbell contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "extbell/rational.hpp"

namespace extbell {

enum class Relation { LessEq, Equal, GreaterEq };
enum class Sense { Maximize, Minimize, Feasibility };

struct LPRow {
    RVector coeffs;
    Relation relation = Relation::LessEq;
    Rational rhs;
};

/// An LP over num_vars variables. Missing bounds default to x >= 0 with no
/// upper bound; std::nullopt in `lower` makes a variable free below.
struct LPProblem {
    std::size_t num_vars = 0;
    Sense sense = Sense::Feasibility;
    RVector objective;
    std::vector<LPRow> rows;
    std::vector<std::optional<Rational>> lower;
    std::vector<std::optional<Rational>> upper;

    /// Throws Error(Input) on inconsistent sizes or crossed bounds.
    void validate() const;
};

enum class LPStatus { Optimal, Infeasible, Unbounded };

struct LPResult {
    LPStatus status = LPStatus::Infeasible;
    Rational value;      // objective value at `primal` (0 for feasibility problems)
    RVector primal;      // a basic optimal (or feasible) solution
    // Optimal: row multipliers y with y_i >= 0 on <= rows and y_i <= 0 on >= rows
    // for Maximize (signs flipped for Minimize), plus multipliers of finite upper
    // bounds. `dual_value` is the dual objective evaluated at these multipliers.
    RVector duals;
    RVector bound_duals;
    Rational dual_value;
    // Infeasible: multipliers y over rows (y_i >= 0 on <= rows, <= 0 on >= rows)
    // and z >= 0 over finite upper bounds such that the combined inequality
    // (y A + z) x <= y b + z u has no solution within the lower bounds.
    RVector farkas;
    RVector farkas_bounds;
    // Unbounded: a feasible point `primal` and a recession direction `ray`
    // improving the objective.
    RVector ray;
    std::size_t pivots = 0;
};

/// Exact two-phase primal simplex with Bland's rule.
LPResult solve(const LPProblem& p);

/// Re-checks an infeasibility certificate exactly.
bool verify_farkas(const LPProblem& p, const RVector& farkas, const RVector& farkas_bounds);

/// Exact feasibility of a point (rows and bounds).
bool is_feasible(const LPProblem& p, const RVector& x);

}  // namespace extbell
