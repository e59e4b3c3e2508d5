// Copyright (c) extbell contributors.
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "extbell/error.hpp"
#include "extbell/linalg.hpp"
#include "extbell/polytope.hpp"

using namespace extbell;

namespace {

// Brute force: every affinely independent d-subset spans a hyperplane; keep
// those with all points on one side whose tight set has dimension d-1.
std::vector<LinearConstraint> brute_facets(const std::vector<RVector>& pts, std::size_t d) {
    std::set<std::pair<RVector, Rational>> found;
    std::vector<std::size_t> pick(d);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t depth) {
        if (depth == d) {
            RMatrix m;
            for (auto i : pick) {
                RVector row = pts[i];
                row.push_back(-1);
                m.push_back(row);
            }
            auto ns = nullspace(m, d + 1);
            if (ns.size() != 1) return;
            RVector a(ns[0].begin(), ns[0].end() - 1);
            Rational b = ns[0][d];
            if (is_zero(a)) return;
            int side = 0;
            for (const auto& p : pts) {
                int s = sgn(dot(a, p) - b);
                if (s == 0) continue;
                if (side == 0) side = s;
                else if (side != s) return;
            }
            if (side > 0) {
                for (auto& q : a) q = -q;
                b = -b;
            }
            LinearConstraint c{a, b};
            auto chk = check_facet(c, pts);
            if (!chk.is_facet()) return;
            make_primitive(c.coeffs, c.rhs);
            found.insert({c.coeffs, c.rhs});
            return;
        }
        for (std::size_t i = start; i < pts.size(); ++i) {
            pick[depth] = i;
            rec(i + 1, depth + 1);
        }
    };
    rec(0, 0);
    std::vector<LinearConstraint> out;
    for (auto& [a, b] : found) out.push_back({a, b});
    return out;
}

std::vector<RVector> random_points(std::mt19937& rng, std::size_t n, std::size_t d, int range) {
    std::uniform_int_distribution<int> dist(-range, range);
    std::vector<RVector> pts;
    for (std::size_t i = 0; i < n; ++i) {
        RVector p(d);
        for (auto& x : p) x = dist(rng);
        pts.push_back(p);
    }
    return pts;
}

// A point is a vertex iff the facets tight at it have normals of full rank.
std::vector<RVector> brute_vertices(const std::vector<RVector>& pts, const std::vector<LinearConstraint>& facets,
                                    std::size_t d) {
    std::set<RVector> out;
    for (const auto& p : pts) {
        RMatrix tight;
        for (const auto& f : facets) {
            if (dot(f.coeffs, p) == f.rhs) tight.push_back(f.coeffs);
        }
        if (rank(tight, d) == d) out.insert(p);
    }
    return {out.begin(), out.end()};
}

}  // namespace

TEST(Polytope, UnitSquare) {
    VRep v{2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}, {Rational(1, 2), Rational(1, 2)}}};
    HRep h = vertices_to_facets(v);
    EXPECT_TRUE(h.equalities.empty());
    EXPECT_EQ(h.inequalities.size(), 4u);
    VRep back = facets_to_vertices(h);
    EXPECT_EQ(back.vertices.size(), 4u);
}

TEST(Polytope, StandardSimplexHasOneEquality) {
    VRep v{3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    HRep h = vertices_to_facets(v);
    ASSERT_EQ(h.equalities.size(), 1u);
    EXPECT_EQ(h.inequalities.size(), 3u);
    for (const auto& f : h.inequalities) EXPECT_TRUE(check_facet(f, v.vertices).is_facet());
    VRep back = facets_to_vertices(h);
    v.canonicalize();
    EXPECT_EQ(back, v);
}

TEST(Polytope, ExtremeRaysOfOrthant) {
    std::vector<IVector> rows{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}};
    auto rays = extreme_rays(rows, 3);
    EXPECT_EQ(rays.size(), 3u);
}

TEST(Polytope, ConeWithLineIsUnbounded) {
    std::vector<IVector> rows{{1, 0}, {2, 0}};
    try {
        extreme_rays(rows, 2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Unbounded);
    }
}

TEST(Polytope, EmptyAndUnboundedSystems) {
    HRep empty{1, {}, {{{1}, 0}, {{-1}, -1}}};  // x <= 0, x >= 1
    try {
        facets_to_vertices(empty);
        FAIL();
    } catch (const EmptyPolytopeError& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Empty);
        ASSERT_EQ(e.farkas().size(), 2u);
        EXPECT_GE(e.farkas()[0], 0);
        EXPECT_GE(e.farkas()[1], 0);
        EXPECT_EQ(e.farkas()[0] - e.farkas()[1], 0);  // y^T A = 0
        EXPECT_LT(e.farkas()[0] * 0 + e.farkas()[1] * -1, 0);
    }
    HRep ray{2, {}, {{{-1, 0}, 0}, {{0, -1}, 0}}};
    try {
        facets_to_vertices(ray);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Unbounded);
    }
    HRep line{2, {}, {{{1, 0}, 1}, {{-1, 0}, 1}}};
    try {
        facets_to_vertices(line);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Unbounded);
    }
}

TEST(Polytope, ResourceCapReportsProgress) {
    VRep cube{4, {}};
    for (int m = 0; m < 16; ++m) cube.vertices.push_back({m & 1, (m >> 1) & 1, (m >> 2) & 1, (m >> 3) & 1});
    DdOptions opts;
    opts.max_rays = 3;
    try {
        vertices_to_facets(cube, opts);
        FAIL();
    } catch (const ResourceLimitError& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Resource);
        EXPECT_GT(e.progress().rays, 3u);
    }
}

class RandomPolytope : public ::testing::TestWithParam<int> {};

TEST_P(RandomPolytope, MatchesBruteForceAndRoundTrips) {
    std::mt19937 rng(static_cast<unsigned>(GetParam()));
    const std::size_t d = 2 + GetParam() % 2;
    auto pts = random_points(rng, 7 + GetParam() % 5, d, 4);
    if (affine_dimension(pts) != static_cast<long>(d)) GTEST_SKIP();
    auto oracle = brute_facets(pts, d);
    for (auto order : {InsertionOrder::MostViolated, InsertionOrder::Lexicographic}) {
        for (auto adj : {AdjacencyTest::Combinatorial, AdjacencyTest::Algebraic}) {
            DdOptions opts;
            opts.order = order;
            opts.adjacency = adj;
            HRep h = vertices_to_facets(VRep{d, pts}, opts);
            ASSERT_EQ(h.inequalities.size(), oracle.size());
            for (const auto& f : oracle) EXPECT_TRUE(contains_facet(h, f));
            VRep back = facets_to_vertices(h, opts);
            EXPECT_EQ(back.vertices, brute_vertices(pts, oracle, d));
        }
    }
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomPolytope, ::testing::Range(1, 25));

TEST(Polytope, LowerDimensionalEmbedding) {
    // a hexagon on the plane x + y + z = 3 in R^3
    std::vector<RVector> pts{{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}, {1, 1, 1}};
    HRep h = vertices_to_facets(VRep{3, pts});
    ASSERT_EQ(h.equalities.size(), 1u);
    EXPECT_EQ(h.inequalities.size(), 6u);
    for (const auto& f : h.inequalities) EXPECT_TRUE(check_facet(f, pts).is_facet());
    // facets equal modulo the equality compare equal
    LinearConstraint xle2{{1, 0, 0}, 2};
    LinearConstraint shifted{{2, 1, 1}, 5};  // x + (x+y+z) <= 2 + 3
    EXPECT_TRUE(contains_facet(h, xle2));
    EXPECT_TRUE(contains_facet(h, shifted));
    EXPECT_FALSE(contains_facet(h, LinearConstraint{{1, 0, 0}, 3}));
    EXPECT_EQ(facets_to_vertices(h).vertices.size(), 6u);
}

TEST(Polytope, IntersectChecksDimensions) {
    EXPECT_THROW(intersect(HRep{2, {}, {}}, HRep{3, {}, {}}), Error);
}
