// Copyright (c) extbell contributors.
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <map>

#include "extbell/fine.hpp"
#include "extbell/io.hpp"
#include "extbell/membership.hpp"
#include "helpers.hpp"

using namespace extbell;
using namespace extbell::testing;
using RC = ResponseClass;

namespace {

std::string fixture(const std::string& rel) { return std::string(EXTBELL_DATA_DIR) + "/" + rel; }

Behaviour load(const ScenarioPtr& s, const std::string& name) { return load_behaviour(fixture("behaviours/" + name + ".tbl"), s); }

// Per-measurement assignment [A0, A1, B0, B1, ...] as a behaviour.
Behaviour point_behaviour(const ScenarioPtr& s, const std::vector<std::size_t>& outcomes) {
    JointDistribution w;
    w.support[outcomes] = 1;
    return behaviour_from_joint(w, s);
}

// True when every per-context support point agrees on shared measurements.
bool consistent(const JointDistribution& w, const Scenario& s) {
    for (const auto& [key, weight] : w.support) {
        std::size_t k = 0;
        for (const auto& p : s.parties()) {
            std::vector<int> seen(p.measurements().size(), -1);
            for (std::size_t c = 0; c < p.contexts().size(); ++c, ++k) {
                auto outs = p.decode_tuple(c, key[k]);
                for (std::size_t i = 0; i < outs.size(); ++i) {
                    auto m = p.contexts()[c][i];
                    if (seen[m] >= 0 && seen[m] != int(outs[i])) return false;
                    seen[m] = int(outs[i]);
                }
            }
        }
    }
    return true;
}

}  // namespace

TEST(Fine, PointMassAndTwoPointMixtures) {
    auto s = triangle();
    auto b = point_behaviour(s, {0, 1, 1, 0, 1});
    auto m = local_model(b, RC::NC, RC::NC);
    ASSERT_TRUE(m);
    auto w = joint_from_nc_decomposition(*s, *m);
    ASSERT_EQ(w.support.size(), 1u);
    EXPECT_EQ(w.support.begin()->first, (std::vector<std::size_t>{0, 1, 1, 0, 1}));
    EXPECT_EQ(w.support.begin()->second, 1);

    auto c = point_behaviour(s, {1, 1, 0, 0, 1});
    auto half = mix({b, c}, {Rational(1, 2), Rational(1, 2)});
    auto mh = local_model(half, RC::NC, RC::NC);
    ASSERT_TRUE(mh);
    auto wh = joint_from_nc_decomposition(*s, *mh);
    ASSERT_EQ(wh.support.size(), 2u);
    for (const auto& [k, x] : wh.support) EXPECT_EQ(x, Rational(1, 2));
    EXPECT_EQ(behaviour_from_joint(wh, s), half);
}

TEST(Fine, PerMeasurementRoundTrip) {
    auto s = triangle();
    JointDistribution w;
    w.support[{0, 0, 0, 1, 1}] = Rational(1, 3);
    w.support[{1, 0, 1, 1, 0}] = Rational(1, 6);
    w.support[{1, 1, 0, 0, 0}] = Rational(1, 2);
    auto m = nc_decomposition_from_joint(w, *s);
    EXPECT_EQ(m.joint.size(), 3u);
    auto b = behaviour_from_joint(w, s);
    EXPECT_EQ(model_behaviour(m, s->dimension()), b.values());
    EXPECT_EQ(joint_from_nc_decomposition(*s, m), w);
}

TEST(Fine, UniformJointGivesMaximallyMixed) {
    auto s = triangle();
    JointDistribution w;
    for (std::size_t x = 0; x < 32; ++x) w.support[{x >> 4 & 1, x >> 3 & 1, x >> 2 & 1, x >> 1 & 1, x & 1}] = Rational(1, 32);
    auto b = behaviour_from_joint(w, s);
    for (const auto& q : b.values()) EXPECT_EQ(q, Rational(1, 8));
}

TEST(Fine, ProjectionOfContextualTableRoundTrips) {
    auto s = triangle();
    auto t = load(s, "triangle_lnd");
    auto witness = load_inequality(fixture("inequalities/triangle_nc_witness.ineq"), *s).inequality;
    auto lnc = behaviour_vectors(joint_vertices(RC::NC, RC::NC, *s));
    // A point of L_nc on the witness face, the nearest stand-in for the table.
    auto top = maximize_over_hull(witness, lnc);
    EXPECT_EQ(top.value, 0);
    Behaviour p(s, top.point);
    auto m = local_model(p, RC::NC, RC::NC);
    ASSERT_TRUE(m);
    auto w = joint_from_nc_decomposition(*s, *m);
    EXPECT_EQ(behaviour_from_joint(w, s), p);
    EXPECT_FALSE(local_model(t, RC::NC, RC::NC).has_value());
}

TEST(Fine, DisturbingMixtureKeepsDisagreement) {
    auto s = chain();
    auto b = load(s, "chain_disturbing");
    auto m = local_model(b, RC::G, RC::G);
    ASSERT_TRUE(m);
    auto w = joint_from_g_decomposition(*s, *m);
    EXPECT_EQ(w.mode, JointDistribution::Mode::PerContext);
    EXPECT_FALSE(consistent(w, *s));
    auto back = g_decomposition_from_joint(w, *s);
    EXPECT_EQ(model_behaviour(back, s->dimension()), b.values());

    auto stored = parse_joint(read_text_file(fixture("behaviours/chain_disturbing.joint")), *s);
    EXPECT_EQ(behaviour_from_joint(stored, s), b);
    for (const auto& [key, x] : stored.support) EXPECT_EQ(x, Rational(1, 2));
}

TEST(Fine, NcModelGivesConsistentPerContextJoint) {
    auto s = triangle();
    auto b = mix({point_behaviour(s, {0, 1, 1, 0, 1}), point_behaviour(s, {1, 0, 0, 0, 0})}, {Rational(1, 4), Rational(3, 4)});
    auto m = local_model(b, RC::G, RC::G);
    ASSERT_TRUE(m);
    auto w = joint_from_g_decomposition(*s, *m);
    EXPECT_TRUE(consistent(w, *s));
    EXPECT_EQ(behaviour_from_joint(w, s), b);
}

TEST(Fine, PointMassesAndDisturbance) {
    auto s = chain();
    JointDistribution ok{JointDistribution::Mode::PerContext, {{{0, 1, 1, 2}, Rational(1)}}};  // B0B1=01, B1B2=10
    auto m = g_decomposition_from_joint(ok, *s);
    ASSERT_EQ(m.vertices_b.size(), 1u);
    EXPECT_TRUE(measurement_assignment(s->party(1), m.vertices_b[0]).has_value());
    JointDistribution bad{JointDistribution::Mode::PerContext, {{{0, 1, 1, 0}, Rational(1)}}};  // B1 flips
    auto md = g_decomposition_from_joint(bad, *s);
    EXPECT_FALSE(measurement_assignment(s->party(1), md.vertices_b[0]).has_value());
}

TEST(Fine, ProductFactorizesAcrossParties) {
    auto s = chain();
    JointDistribution w{JointDistribution::Mode::PerContext, {}};
    // Alice: (A0, A1) = (0, 1) or (1, 1) with 1/3, 2/3. Bob: (B0B1, B1B2) = (01, 10) or (00, 00) with 1/2 each.
    const std::vector<std::pair<std::vector<std::size_t>, Rational>> alice{{{0, 1}, Rational(1, 3)}, {{1, 1}, Rational(2, 3)}};
    const std::vector<std::pair<std::vector<std::size_t>, Rational>> bob{{{1, 2}, Rational(1, 2)}, {{0, 0}, Rational(1, 2)}};
    for (const auto& [a, pa] : alice)
        for (const auto& [b, pb] : bob) w.support[{a[0], a[1], b[0], b[1]}] = pa * pb;
    auto m = g_decomposition_from_joint(w, *s);
    EXPECT_EQ(m.joint.size(), 4u);
    auto back = joint_from_g_decomposition(*s, m);
    EXPECT_EQ(back, w);
    // Direct product computation: the joint equals the product of its party marginals.
    std::map<std::vector<std::size_t>, Rational> ma, mb;
    for (const auto& [key, x] : back.support) {
        ma[{key[0], key[1]}] += x;
        mb[{key[2], key[3]}] += x;
    }
    for (const auto& [key, x] : back.support) {
        std::vector<std::size_t> ka{key[0], key[1]}, kb{key[2], key[3]};
        EXPECT_EQ(x, ma[ka] * mb[kb]);
    }
    EXPECT_EQ(behaviour_from_joint(back, s).values(), model_behaviour(m, s->dimension()));
}

TEST(Fine, EquivalenceOnFixtures) {
    struct Case {
        ScenarioPtr s;
        std::string name;
        bool nc, g;
    };
    auto c = chain();
    auto t = triangle();
    for (const auto& k : {Case{c, "chain_disturbing", false, true}, Case{t, "triangle_lnd", false, true},
                          Case{t, "triangle_lg", false, true}}) {
        auto b = load(k.s, k.name);
        EXPECT_EQ(membership(b, joint_vertices(RC::NC, RC::NC, *k.s)).is_decomposition(), k.nc) << k.name;
        EXPECT_EQ(membership(b, joint_vertices(RC::G, RC::G, *k.s)).is_decomposition(), k.g) << k.name;
        Certificate sep;
        auto mnc = local_model(b, RC::NC, RC::NC, &sep);
        EXPECT_EQ(mnc.has_value(), k.nc);
        if (!mnc) EXPECT_FALSE(sep.is_decomposition());
        auto mg = local_model(b, RC::G, RC::G);
        ASSERT_EQ(mg.has_value(), k.g);
        auto w = joint_from_g_decomposition(*k.s, *mg);
        EXPECT_EQ(behaviour_from_joint(w, k.s), b) << k.name;
    }
}

TEST(Fine, InvalidJointRejected) {
    auto s = chain();
    JointDistribution w{JointDistribution::Mode::PerMeasurement, {{{0, 1, 1, 0, 1}, Rational(1, 2)}}};
    EXPECT_THROW(w.validate(*s), Error);
    w.support[{0, 1, 1}] = Rational(1, 2);
    EXPECT_THROW(w.validate(*s), Error);
    JointDistribution range{JointDistribution::Mode::PerMeasurement, {{{0, 2, 1, 0, 1}, Rational(1)}}};
    EXPECT_THROW(range.validate(*s), Error);
}
