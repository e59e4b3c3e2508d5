// Copyright (c) extbell contributors.
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "extbell/error.hpp"
#include "extbell/linalg.hpp"
#include "extbell/rational.hpp"

using namespace extbell;

TEST(Rational, ParsesExactLiterals) {
    EXPECT_EQ(parse_rational("3/6"), Rational(1, 2));
    EXPECT_EQ(parse_rational("-4"), Rational(-4));
    EXPECT_EQ(parse_rational("0"), Rational(0));
    EXPECT_EQ(to_string(parse_rational("10/4")), "5/2");
}

TEST(Rational, RejectsDecimalsAndGarbage) {
    for (const char* bad : {"0.5", "", "1/0", "a", "1//2", "1/ 2", "--1"}) {
        EXPECT_FALSE(is_rational_literal(bad)) << bad;
        EXPECT_THROW(parse_rational(bad), Error) << bad;
    }
}

TEST(Rational, MakePrimitiveKeepsDirection) {
    RVector v{Rational(1, 2), Rational(-3, 4), 0};
    Rational rhs(5, 4);
    Rational f = make_primitive(v, rhs);
    EXPECT_EQ(f, Rational(4));
    EXPECT_EQ(v, (RVector{2, -3, 0}));
    EXPECT_EQ(rhs, Rational(5));
}

TEST(Linalg, NullspaceIsOrthogonal) {
    RMatrix m{{1, 2, 3, 4}, {2, 4, 6, 8}, {0, 1, 1, 0}};
    EXPECT_EQ(rank(m, 4), 2u);
    auto ns = nullspace(m, 4);
    ASSERT_EQ(ns.size(), 2u);
    for (const auto& z : ns)
        for (const auto& row : m) EXPECT_EQ(dot(row, z), 0);
}

TEST(Linalg, SolveParticularDetectsInconsistency) {
    RMatrix m{{1, 1}, {2, 2}};
    RVector x;
    EXPECT_FALSE(solve_particular(m, {1, 3}, 2, x));
    EXPECT_TRUE(solve_particular(m, {1, 2}, 2, x));
    EXPECT_EQ(x[0] + x[1], 1);
}
