// Copyright (c) extbell contributors.
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <random>

#include "extbell/io.hpp"
#include "extbell/quantum.hpp"
#include "extbell/sets.hpp"
#include "helpers.hpp"

using namespace extbell;
using namespace extbell::testing;
using Kind = AtomicSet::Kind;
using RC = ResponseClass;

namespace {

std::string fixture(const std::string& rel) { return std::string(EXTBELL_DATA_DIR) + "/" + rel; }

Behaviour load(const ScenarioPtr& s, const std::string& name) { return load_behaviour(fixture("behaviours/" + name + ".tbl"), s); }

bool has_witness(const HierarchyAudit& a, const std::string& inner, const std::string& outer) {
    for (const auto& w : a.witnesses)
        if (w.inner == SetLabel::parse(inner) && w.outer == SetLabel::parse(outer)) return true;
    return false;
}

}  // namespace

TEST(Labels, ParseAliasesAndIntersections) {
    EXPECT_EQ(SetLabel::parse("L_nc").parts, std::vector{AtomicSet::local(RC::NC, RC::NC)});
    EXPECT_EQ(SetLabel::parse("L_{NC,NC}"), SetLabel::parse("L_nc"));
    EXPECT_EQ(SetLabel::parse("L_{nd,nd}"), SetLabel::parse("L_nd"));
    EXPECT_EQ(SetLabel::parse("L_{G,G}"), SetLabel::parse("L_G"));
    EXPECT_EQ(SetLabel::parse("L_{NC,G}").str(), "L_{NC,G}");
    EXPECT_EQ(SetLabel::parse("L_nd&NC").parts.size(), 2u);
    EXPECT_EQ(SetLabel::parse("L_nd&NC").str(), "L_nd&NC");
    EXPECT_EQ(SetLabel::parse("L_ND").parts.front().kind, Kind::LocalNonDisturbing);
    EXPECT_THROW(SetLabel::parse("L_{X,G}"), Error);
    EXPECT_THROW(SetLabel::parse("Q"), Error);
    auto list = parse_labels("L_{NC,G},NS&ND_B, L_nd");
    ASSERT_EQ(list.size(), 3u);
    EXPECT_EQ(list[1].str(), "NS&ND_B");
    for (const auto& a : all_atomic_sets(2)) EXPECT_EQ(SetLabel::parse(to_string(a)).parts.front(), a);
    EXPECT_EQ(all_atomic_sets(2).size(), 18u);
}

TEST(Classify, DisturbingMixture) {
    auto s = chain();
    auto r = classify(load(s, "chain_disturbing"), parse_labels("NSND,L_ND,L_nd,L_nc"));
    EXPECT_TRUE(r.member(SetLabel::parse("NSND")));
    EXPECT_TRUE(r.member(SetLabel::parse("L_ND")));
    EXPECT_FALSE(r.member(SetLabel::parse("L_nd")));
    EXPECT_FALSE(r.member(SetLabel::parse("L_nc")));
    auto* lnd = r.find(AtomicSet::local(RC::ND, RC::ND));
    ASSERT_TRUE(lnd && lnd->certificate);
    EXPECT_FALSE(lnd->certificate->is_decomposition());
    EXPECT_FALSE(r.render(*s).empty());
}

TEST(Classify, TriangleTables) {
    auto s = triangle();
    Classifier cl(s);
    auto r3 = cl.classify(load(s, "triangle_lnd"), parse_labels("L_nd&NC,L_nc"));
    EXPECT_TRUE(r3.member(SetLabel::parse("L_nd&NC")));
    EXPECT_FALSE(r3.member(SetLabel::parse("L_nc")));
    auto r4 = cl.classify(load(s, "triangle_lg"), parse_labels("L_G&NC,L_nd&NC"));
    EXPECT_TRUE(r4.member(SetLabel::parse("L_G&NC")));
    EXPECT_FALSE(r4.member(SetLabel::parse("L_nd&NC")));
    auto witness = load_inequality(fixture("inequalities/triangle_nd_witness.ineq"), *s).inequality;
    EXPECT_GT(evaluate(witness, load(s, "triangle_lg")), witness.bound);
}

TEST(Classify, EveryNoCarriesAVerifiedSeparation) {
    auto s = triangle();
    Classifier cl(s);
    std::vector<SetLabel> every;
    for (const auto& a : all_atomic_sets(2)) every.push_back(SetLabel{{a}});
    for (const char* name : {"triangle_lnd", "triangle_lg"}) {
        auto b = load(s, name);
        auto r = cl.classify(b, every);
        for (const auto& v : r.atoms) {
            bool hull = v.set.kind == Kind::Local || v.set.kind == Kind::LocalNonDisturbing;
            if (!hull || v.member || !v.certificate) continue;
            EXPECT_FALSE(v.certificate->is_decomposition());
            EXPECT_EQ(dot(v.certificate->coeffs, b.values()), v.certificate->value);
            EXPECT_GT(v.certificate->value, v.certificate->bound);
        }
    }
}

TEST(Classify, InclusionsAreEnforced) {
    auto s = chain();
    auto r = classify(load(s, "chain_disturbing"), parse_labels("L_nc,L_nd,L_G"));
    EXPECT_NO_THROW(check_inclusions(r));
    for (auto& a : r.atoms)
        if (a.set == AtomicSet::local(RC::NC, RC::NC)) a.member = true;  // L_nc yes but L_nd no
    try {
        check_inclusions(r);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Verification);
    }
}

TEST(MarginalNc, Cases) {
    auto t = triangle();
    EXPECT_TRUE(marginal_nc(load(t, "triangle_lnd"), 1).is_decomposition());
    auto c = chain();
    EXPECT_TRUE(marginal_nc(load(c, "chain_disturbing"), 0).is_decomposition());
    auto sq = square();
    auto sep = marginal_nc(pr_product_behaviour(sq), 1);
    EXPECT_FALSE(sep.is_decomposition());
    RVector v = load(c, "chain_disturbing").values();
    v[coordinate_of(*c, "A0B0B1", "001")] -= Rational(1, 4);
    v[coordinate_of(*c, "A0B0B1", "011")] += Rational(1, 4);
    EXPECT_THROW(marginal_nc(Behaviour(c, v), 1), SignalingError);
}

TEST(Classify, SignalingBehaviourIsNotNc) {
    auto c = chain();
    RVector v = load(c, "chain_disturbing").values();
    v[coordinate_of(*c, "A0B0B1", "001")] -= Rational(1, 4);
    v[coordinate_of(*c, "A0B0B1", "011")] += Rational(1, 4);
    auto r = classify(Behaviour(c, v), parse_labels("NS,NC_B,L_G"));
    EXPECT_FALSE(r.member(SetLabel::parse("NS")));
    EXPECT_FALSE(r.member(SetLabel::parse("NC_B")));
    EXPECT_FALSE(r.member(SetLabel::parse("L_G")));
    EXPECT_FALSE(r.find(AtomicSet{Kind::NC_B})->note.empty());
}

TEST(Hierarchy, ProperInclusionWitnesses) {
    auto c = chain();
    auto a1 = hierarchy_audit(c, {load(c, "chain_disturbing")});
    EXPECT_TRUE(has_witness(a1, "L_nd", "L_ND"));
    auto t = triangle();
    auto a2 = hierarchy_audit(t, {load(t, "triangle_lnd"), load(t, "triangle_lg")});
    EXPECT_TRUE(has_witness(a2, "L_nc", "L_nd&NC"));
    EXPECT_TRUE(has_witness(a2, "L_nd&NC", "L_G&NC"));
    for (const auto& w : a2.witnesses) EXPECT_FALSE(w.separation.is_decomposition());
}

TEST(Hierarchy, LncEqualsLncAndNcOnSamples) {
    auto t = triangle();
    std::mt19937_64 rng(4);
    std::vector<Behaviour> samples;
    for (int k = 0; k < 4; ++k) {
        auto sample = random_separable_qubit_model(*t, rng);
        auto exact = rationalize(separable_behaviour(sample.components, sample.projectors, *t).behaviour, t);
        ASSERT_TRUE(exact);
        samples.push_back(*exact);
    }
    samples.push_back(load(t, "triangle_lnd"));
    samples.push_back(load(t, "triangle_lg"));
    auto audit = hierarchy_audit(t, samples);
    for (const auto& r : audit.reports)
        EXPECT_EQ(r.member(SetLabel::parse("L_nc")), r.member(SetLabel::parse("L_nc&NC")));
}

TEST(LocalSets, ChshAllCoincide) {
    auto audit = local_set_audit(chsh());
    EXPECT_EQ(audit.sets.size(), 9u);
    EXPECT_TRUE(audit.all_equal());
}

TEST(LocalSets, TriangleDiffers) {
    auto audit = local_set_audit(triangle());
    EXPECT_FALSE(audit.all_equal());
    // Diagonal: each set contains itself; NC-class vertices lie in every set.
    for (std::size_t i = 0; i < audit.sets.size(); ++i) {
        EXPECT_TRUE(audit.contained[i][i]);
        EXPECT_TRUE(audit.contained[0][i]);
    }
}

TEST(SetVertices, RejectsConstraintSets) {
    EXPECT_THROW(set_vertices(chain(), AtomicSet{Kind::NS}), Error);
    EXPECT_EQ(set_vertices(chain(), AtomicSet::local(RC::G, RC::G)).vertices.size(), 64u);
}
