// Copyright (c) extbell contributors.
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "extbell/behaviour.hpp"
#include "extbell/membership.hpp"
#include "extbell/vertices.hpp"
#include "helpers.hpp"

using namespace extbell;
using namespace extbell::testing;

namespace {

std::set<RVector> values_of(const std::vector<ResponseFunction>& fs) {
    std::set<RVector> out;
    for (const auto& f : fs) out.insert(f.values);
    return out;
}

bool deterministic(const ResponseFunction& f) {
    return std::all_of(f.values.begin(), f.values.end(), [](const Rational& q) { return q == 0 || q == 1; });
}

// Oracle for the ND polytope of a party: no shared measurement changes its
// marginal between the contexts holding it.
bool non_disturbing(const Party& p, const ResponseFunction& f) {
    auto one = party_scenario(p);
    return check_nd(Behaviour(one, f.values), 0).ok();
}

}  // namespace

TEST(Vertices, NcCounts) {
    EXPECT_EQ(enumerate_nc_vertices(singleton_party("A", 2)).size(), 4u);
    EXPECT_EQ(enumerate_nc_vertices(path_party("B")).size(), 8u);
    EXPECT_EQ(enumerate_nc_vertices(cycle_party("B", 4)).size(), 16u);
}

TEST(Vertices, GCountsAndNcSubset) {
    auto bob = path_party("B");
    auto g = enumerate_g_vertices(bob);
    EXPECT_EQ(g.size(), 16u);
    std::size_t nd = std::count_if(g.begin(), g.end(), [&](const auto& f) { return non_disturbing(bob, f); });
    EXPECT_EQ(nd, 8u);
    auto nc = values_of(enumerate_nc_vertices(bob));
    for (const auto& f : g) EXPECT_EQ(nc.count(f.values) == 1, non_disturbing(bob, f));
    EXPECT_EQ(enumerate_g_vertices(triangle_party("B")).size(), 64u);
}

TEST(Vertices, SingletonContextsDegenerate) {
    auto a = singleton_party("A", 3);
    auto nc = values_of(enumerate_nc_vertices(a));
    EXPECT_EQ(values_of(enumerate_g_vertices(a)), nc);
    EXPECT_EQ(values_of(enumerate_nd_vertices(a)), nc);
}

TEST(Vertices, PathNdEqualsNc) {
    auto bob = path_party("B");
    EXPECT_EQ(values_of(enumerate_nd_vertices(bob)), values_of(enumerate_nc_vertices(bob)));
}

TEST(Vertices, SquareNdHasPrTypeVertices) {
    auto bob = cycle_party("B", 4);
    auto nd = enumerate_nd_vertices(bob);
    ASSERT_EQ(nd.size(), 24u);
    std::size_t det = std::count_if(nd.begin(), nd.end(), deterministic);
    EXPECT_EQ(det, 16u);
    for (const auto& f : nd) {
        if (deterministic(f)) continue;
        // Contextual vertices put 1/2 on two tuples of every context.
        for (const auto& q : f.values) EXPECT_TRUE(q == 0 || q == Rational(1, 2));
    }
}

TEST(Vertices, TriangleNdCountPinned) {
    auto bob = triangle_party("B");
    auto nd = enumerate_nd_vertices(bob);
    std::size_t det = std::count_if(nd.begin(), nd.end(), deterministic);
    EXPECT_EQ(det, 8u);
    EXPECT_EQ(nd.size(), 12u);  // regression value from the first enumeration
}

TEST(Vertices, ClassPredicatesHold) {
    for (const auto& p : {path_party("B"), triangle_party("B"), cycle_party("B", 4)}) {
        for (const auto& f : enumerate_nc_vertices(p)) {
            EXPECT_TRUE(measurement_assignment(p, f).has_value());
            EXPECT_EQ(f.cls, ResponseClass::NC);
        }
        for (const auto& f : enumerate_nd_vertices(p)) EXPECT_TRUE(non_disturbing(p, f));
        for (const auto& f : enumerate_g_vertices(p)) EXPECT_TRUE(context_assignment(p, f).has_value());
    }
}

TEST(Vertices, HierarchyPerParty) {
    auto bob = cycle_party("B", 4);
    auto nc = enumerate_nc_vertices(bob);
    auto nd = values_of(enumerate_nd_vertices(bob));
    for (const auto& f : nc) EXPECT_EQ(nd.count(f.values), 1u);
    std::vector<RVector> g;
    for (const auto& f : enumerate_g_vertices(bob)) g.push_back(f.values);
    for (const auto& v : nd) EXPECT_TRUE(membership(v, g).is_decomposition());
}

TEST(Vertices, NoVertexIsAMixtureOfOthers) {
    auto nd = enumerate_nd_vertices(triangle_party("B"));
    std::vector<RVector> all;
    for (const auto& f : nd) all.push_back(f.values);
    for (std::size_t i = 0; i < all.size(); ++i) {
        std::vector<RVector> rest;
        for (std::size_t j = 0; j < all.size(); ++j)
            if (j != i) rest.push_back(all[j]);
        EXPECT_FALSE(membership(all[i], rest).is_decomposition()) << "vertex " << i;
    }
}

TEST(JointVertices, Counts) {
    auto s = chain();
    EXPECT_EQ(joint_vertices(ResponseClass::G, ResponseClass::G, *s).size(), 64u);
    EXPECT_EQ(joint_vertices(ResponseClass::ND, ResponseClass::ND, *s).size(), 32u);
    auto c = chsh();
    std::set<RVector> first;
    for (const auto& v : joint_vertices(ResponseClass::NC, ResponseClass::NC, *c)) first.insert(v.behaviour);
    EXPECT_EQ(first.size(), 16u);
    for (auto a : {ResponseClass::NC, ResponseClass::ND, ResponseClass::G})
        for (auto b : {ResponseClass::NC, ResponseClass::ND, ResponseClass::G}) {
            std::set<RVector> got;
            for (const auto& v : joint_vertices(a, b, *c)) got.insert(v.behaviour);
            EXPECT_EQ(got, first);
        }
}

TEST(JointVertices, ProductEntriesAndWorkerIndependence) {
    auto s = triangle();
    auto one = joint_vertices(ResponseClass::NC, ResponseClass::ND, *s, 1);
    auto four = joint_vertices(ResponseClass::NC, ResponseClass::ND, *s, 4);
    ASSERT_EQ(one.size(), four.size());
    for (std::size_t i = 0; i < one.size(); ++i) EXPECT_EQ(one[i].behaviour, four[i].behaviour);

    auto va = enumerate_nc_vertices(s->party(0));
    auto vb = enumerate_nd_vertices(s->party(1));
    const auto& idx = s->index();
    for (const auto& jv : one) {
        const auto& fa = va[jv.parts[0]];
        const auto& fb = vb[jv.parts[1]];
        for (std::size_t pos = 0; pos < s->dimension(); ++pos) {
            auto key = idx.key(pos);
            const auto& ctx = idx.joint_context(key.joint_context);
            Rational pa = fa.values[s->party(0).local_offset(ctx[0]) + key.tuples[0]];
            Rational pb = fb.values[s->party(1).local_offset(ctx[1]) + key.tuples[1]];
            EXPECT_EQ(jv.behaviour[pos], pa * pb);
        }
    }
}

TEST(ResponseClass, Parsing) {
    EXPECT_EQ(parse_response_class("nd"), ResponseClass::ND);
    EXPECT_EQ(parse_response_class("G"), ResponseClass::G);
    EXPECT_THROW(parse_response_class("xx"), Error);
}
