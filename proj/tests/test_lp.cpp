// Copyright (c) extbell contributors.
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <random>

#include "extbell/error.hpp"
#include "extbell/lp.hpp"

using namespace extbell;

TEST(LP, TrivialMaximum) {
    LPProblem p;
    p.num_vars = 1;
    p.sense = Sense::Maximize;
    p.objective = {1};
    p.rows = {{{1}, Relation::LessEq, 1}};
    auto r = solve(p);
    ASSERT_EQ(r.status, LPStatus::Optimal);
    EXPECT_EQ(r.value, 1);
    EXPECT_EQ(r.primal, (RVector{1}));
    EXPECT_EQ(r.dual_value, 1);
    EXPECT_EQ(r.duals, (RVector{1}));
}

TEST(LP, InfeasibleHasFarkasCertificate) {
    LPProblem p;
    p.num_vars = 2;
    p.rows = {{{1, 1}, Relation::LessEq, 1}, {{1, 1}, Relation::GreaterEq, 3}};
    auto r = solve(p);
    ASSERT_EQ(r.status, LPStatus::Infeasible);
    EXPECT_TRUE(verify_farkas(p, r.farkas, r.farkas_bounds));
}

TEST(LP, UnboundedHasRay) {
    LPProblem p;
    p.num_vars = 2;
    p.sense = Sense::Maximize;
    p.objective = {1, 1};
    p.rows = {{{1, -1}, Relation::LessEq, 1}};
    auto r = solve(p);
    ASSERT_EQ(r.status, LPStatus::Unbounded);
    EXPECT_TRUE(is_feasible(p, r.primal));
    EXPECT_GT(dot(p.objective, r.ray), 0);
    EXPECT_LE(dot(p.rows[0].coeffs, r.ray), 0);
}

TEST(LP, BoundsAndFreeVariables) {
    // min x - y  s.t. -2 <= x <= 3, y free, y <= 2x + 1, y <= 4
    LPProblem p;
    p.num_vars = 2;
    p.sense = Sense::Minimize;
    p.objective = {1, -1};
    p.lower = {Rational(-2), std::nullopt};
    p.upper = {Rational(3), std::nullopt};
    p.rows = {{{-2, 1}, Relation::LessEq, 1}, {{0, 1}, Relation::LessEq, 4}};
    auto r = solve(p);
    ASSERT_EQ(r.status, LPStatus::Optimal);
    // on y = 2x+1 with y <= 4 the objective x - y = -x - 1 is minimized at x = 3/2
    EXPECT_EQ(r.value, Rational(-5, 2));
    EXPECT_EQ(r.dual_value, r.value);
    EXPECT_TRUE(is_feasible(p, r.primal));
}

TEST(LP, RedundantEqualities) {
    LPProblem p;
    p.num_vars = 3;
    p.sense = Sense::Maximize;
    p.objective = {1, 2, 3};
    p.rows = {{{1, 1, 1}, Relation::Equal, 1}, {{2, 2, 2}, Relation::Equal, 2}, {{0, 0, 1}, Relation::LessEq, Rational(1, 3)}};
    auto r = solve(p);
    ASSERT_EQ(r.status, LPStatus::Optimal);
    EXPECT_EQ(r.value, Rational(7, 3));
    EXPECT_EQ(r.dual_value, r.value);
}

// Random bounded problems: strong duality and dual feasibility, checked directly.
TEST(LP, RandomDuality) {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> coef(-5, 5);
    for (int trial = 0; trial < 60; ++trial) {
        LPProblem p;
        p.num_vars = 4;
        p.sense = Sense::Maximize;
        for (int j = 0; j < 4; ++j) p.objective.push_back(coef(rng));
        for (int i = 0; i < 5; ++i) {
            LPRow row;
            for (int j = 0; j < 4; ++j) row.coeffs.push_back(coef(rng));
            row.relation = trial % 3 == 0 && i == 0 ? Relation::Equal : Relation::LessEq;
            row.rhs = coef(rng) + 3;
            p.rows.push_back(row);
        }
        p.rows.push_back({{1, 1, 1, 1}, Relation::LessEq, 10});
        auto r = solve(p);
        if (r.status == LPStatus::Infeasible) {
            EXPECT_TRUE(verify_farkas(p, r.farkas, r.farkas_bounds));
            continue;
        }
        ASSERT_EQ(r.status, LPStatus::Optimal);
        EXPECT_TRUE(is_feasible(p, r.primal));
        Rational yb = 0;
        for (std::size_t i = 0; i < p.rows.size(); ++i) {
            yb += r.duals[i] * p.rows[i].rhs;
            if (p.rows[i].relation == Relation::LessEq) EXPECT_GE(r.duals[i], 0);
        }
        EXPECT_EQ(yb, r.value);
        for (int j = 0; j < 4; ++j) {
            Rational col = 0;
            for (std::size_t i = 0; i < p.rows.size(); ++i) col += r.duals[i] * p.rows[i].coeffs[j];
            EXPECT_GE(col, p.objective[j]);
        }
    }
}

TEST(LP, DimensionErrors) {
    LPProblem p;
    p.num_vars = 2;
    p.rows = {{{1}, Relation::LessEq, 1}};
    EXPECT_THROW(solve(p), Error);
}
