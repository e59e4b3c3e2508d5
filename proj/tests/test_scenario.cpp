// Copyright (c) extbell contributors.
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "extbell/error.hpp"
#include "helpers.hpp"

using namespace extbell;
using namespace extbell::testing;

TEST(Scenario, Dimensions) {
    EXPECT_EQ(chain()->dimension(), 32u);
    EXPECT_EQ(triangle()->dimension(), 48u);
    EXPECT_EQ(chsh()->dimension(), 16u);
}

TEST(Scenario, LabelsFollowRowColumnLayout) {
    auto s = chain();
    EXPECT_EQ(s->row_label(0), "A0B0B1");
    EXPECT_EQ(s->row_label(1), "A0B1B2");
    EXPECT_EQ(s->row_label(3), "A1B1B2");
    EXPECT_EQ(s->column_label(0, 1), "001");
    EXPECT_EQ(s->column_label(0, 4), "100");
    EXPECT_EQ(s->column_label(2, 6), "110");
}

TEST(Scenario, IndexRoundTrip) {
    for (auto s : {chain(), triangle(), chsh()}) {
        const auto& idx = s->index();
        for (std::size_t p = 0; p < idx.dimension(); ++p) EXPECT_EQ(idx.position(idx.key(p)), p);
    }
}

TEST(Scenario, IndexIsDeterministic) {
    auto a = triangle();
    auto b = triangle();
    EXPECT_EQ(*a, *b);
    for (std::size_t p = 0; p < a->dimension(); ++p) EXPECT_EQ(a->index().key(p), b->index().key(p));
}

TEST(Scenario, Subcontexts) {
    auto path = subcontexts(path_party("B"));
    ASSERT_EQ(path.size(), 1u);
    EXPECT_EQ(path[0].measurements, (Context{1}));
    EXPECT_EQ(path[0].parents, (std::vector<std::size_t>{0, 1}));
    auto tri = subcontexts(triangle_party("B"));
    ASSERT_EQ(tri.size(), 3u);
    for (const auto& s : tri) {
        EXPECT_EQ(s.measurements.size(), 1u);
        EXPECT_EQ(s.parents.size(), 2u);
    }
    EXPECT_TRUE(subcontexts(singleton_party("A", 2)).empty());
}

TEST(Scenario, RejectsInvalidParties) {
    auto m = [](const char* l) { return binary(l); };
    EXPECT_THROW(Party("B", {m("B0"), m("B1")}, {{"B0", "B1"}, {"B0"}}), Error);          // not maximal
    EXPECT_THROW(Party("B", {m("B0"), m("B1")}, {{"B0"}}), Error);                        // B1 uncovered
    EXPECT_THROW(Party("B", {m("B0"), m("B0")}, {{"B0"}}), Error);                        // duplicate label
    EXPECT_THROW(Party("B", {m("B0"), m("B1")}, {{"B0", "B0"}, {"B1"}}), Error);          // repeated measurement
    EXPECT_THROW(Party("B", {Measurement{"B0", {}}}, {{"B0"}}), Error);                   // empty outcomes
    EXPECT_THROW(Party("B", {m("B0")}, {{"B9"}}), Error);                                 // unknown label
    try {
        Party("B", {m("B0"), m("B1")}, {{"B0", "B1"}, {"B1"}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Validation);
        EXPECT_NE(std::string(e.what()).find("maximal"), std::string::npos);
    }
}

TEST(Scenario, RejectsThreeParties) {
    EXPECT_THROW(Scenario("x", {singleton_party("A", 2), singleton_party("B", 2), singleton_party("C", 2)}), Error);
}

TEST(Scenario, SinglePartyLayout) {
    Scenario s("ks", {triangle_party("B")});
    EXPECT_EQ(s.dimension(), 12u);
    EXPECT_EQ(s.row_label(2), "B2B0");
}
