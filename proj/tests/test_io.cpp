// Copyright (c) extbell contributors.
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <clocale>
#include <filesystem>

#include "extbell/fine.hpp"
#include "extbell/io.hpp"
#include "extbell/membership.hpp"
#include "extbell/quantum.hpp"
#include "extbell/vertices.hpp"
#include "helpers.hpp"

using namespace extbell;
using namespace extbell::testing;

namespace {

std::string fixture(const std::string& rel) { return std::string(EXTBELL_DATA_DIR) + "/" + rel; }

// Expects an Input error whose message names the given line.
template <class F>
void expect_line_error(F&& f, int line) {
    try {
        f();
        ADD_FAILURE() << "no error raised";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Input) << e.what();
        EXPECT_NE(std::string(e.what()).find("line " + std::to_string(line) + ":"), std::string::npos) << e.what();
    }
}

const char* kTable =
    "scenario chain\n"
    "columns  000  001  010  011  100  101  110  111\n"
    "A0B0B1   0    1/2  1/2  0    0    0    0    0\n"
    "A0B1B2   1/2  0    1/2  0    0    0    0    0\n"
    "A1B0B1   0    0    1/2  0    0    1/2  0    0\n"
    "A1B1B2   0    0    1/2  0    1/2  0    0    0\n";

}  // namespace

TEST(ScenarioFile, FixturesMatchBuilders) {
    EXPECT_EQ(*load_scenario(fixture("scenarios/chain.scn")), *chain());
    EXPECT_EQ(*load_scenario(fixture("scenarios/triangle.scn")), *triangle());
    EXPECT_EQ(*load_scenario(fixture("scenarios/square.scn")), *square());
    EXPECT_EQ(*load_scenario(fixture("scenarios/chsh.scn")), *chsh());
}

TEST(ScenarioFile, RoundTrip) {
    for (auto s : {chain(), triangle(), square(), chsh()}) {
        auto text = serialize_scenario(*s);
        EXPECT_EQ(parse_scenario(text), *s);
        EXPECT_EQ(serialize_scenario(parse_scenario(text)), text);
    }
}

TEST(ScenarioFile, Errors) {
    expect_line_error([] { parse_scenario("scenario x\nmeasurement A0 : 0 1\n"); }, 2);
    expect_line_error([] { parse_scenario("scenario x\nparty A\n  measurement A0 0 1\n"); }, 3);
    expect_line_error([] { parse_scenario("# c\nscenario x\nparty A\n  widget\n"); }, 4);
    EXPECT_THROW(parse_scenario(""), Error);
}

TEST(ScenarioFile, HashIsStable) {
    EXPECT_EQ(scenario_hash(*chain()), scenario_hash(*load_scenario(fixture("scenarios/chain.scn"))));
    EXPECT_NE(scenario_hash(*chain()), scenario_hash(*triangle()));
    EXPECT_EQ(scenario_hash(*chain()).size(), 16u);
}

TEST(BehaviourTable, ParseAndByteIdenticalRoundTrip) {
    auto s = chain();
    auto b = parse_behaviour_table(kTable, s);
    EXPECT_EQ(b[coordinate_of(*s, "A0B0B1", "001")], Rational(1, 2));
    EXPECT_EQ(serialize_behaviour_table(b), kTable);
    for (const char* name : {"chain_disturbing", "triangle_lnd", "triangle_lg"}) {
        auto path = fixture(std::string("behaviours/") + name + ".tbl");
        auto text = read_text_file(path);
        auto sc = load_scenario(fixture(std::string("scenarios/") + (name[0] == 'c' ? "chain" : "triangle") + ".scn"));
        EXPECT_EQ(serialize_behaviour_table(parse_behaviour_table(text, sc)), text) << name;
    }
}

TEST(BehaviourTable, Errors) {
    auto s = chain();
    std::string t = kTable;
    auto replace = [&](const std::string& from, const std::string& to) {
        std::string x = t;
        x.replace(x.find(from), from.size(), to);
        return x;
    };
    expect_line_error([&] { parse_behaviour_table(replace("A0B1B2   1/2", "A0B1B2   0.5"), s); }, 4);
    expect_line_error([&] { parse_behaviour_table(replace("A1B0B1   0    0    1/2  0    0    1/2  0    0",
                                                          "A1B0B1   0    0    1/2  0    0    1/2  0"), s); }, 5);
    expect_line_error([&] { parse_behaviour_table(replace("A1B1B2", "A1B2B1"), s); }, 6);
    expect_line_error([&] { parse_behaviour_table(replace("A1B1B2", "A0B0B1"), s); }, 6);
    expect_line_error([&] { parse_behaviour_table(replace("scenario chain", "scenario triangle"), s); }, 1);
    EXPECT_THROW(parse_behaviour_table(replace("A1B1B2   0    0    1/2  0    1/2  0    0    0\n", ""), s), Error);
    try {
        parse_behaviour_table(replace("A0B1B2   1/2", "A0B1B2   1/4"), s);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Validation);
        EXPECT_NE(std::string(e.what()).find("sums to 3/4"), std::string::npos) << e.what();
    }
}

TEST(BehaviourTable, WhitespaceAndComments) {
    auto s = chain();
    std::string loose = "# comment\n\n  scenario   chain\ncolumns 000 001 010 011 100 101 110 111\t\n"
                        "A0B0B1 0 1/2 1/2 0 0 0 0 0   # trailing\n"
                        "A0B1B2 1/2 0 1/2 0 0 0 0 0\nA1B0B1 0 0 1/2 0 0 1/2 0 0\nA1B1B2 0 0 1/2 0 1/2 0 0 0\n";
    EXPECT_EQ(serialize_behaviour_table(parse_behaviour_table(loose, s)), kTable);
    std::setlocale(LC_ALL, "de_DE.UTF-8");
    EXPECT_EQ(serialize_behaviour_table(parse_behaviour_table(loose, s)), kTable);
    std::setlocale(LC_ALL, "C");
}

TEST(Coordinates, NamesRoundTrip) {
    auto s = triangle();
    for (std::size_t i = 0; i < s->dimension(); ++i) {
        auto name = coordinate_name(*s, i);
        auto bar = name.find('|');
        EXPECT_EQ(coordinate_of(*s, name.substr(bar + 1, name.size() - bar - 2), name.substr(2, bar - 2)), i);
    }
    EXPECT_THROW(coordinate_of(*s, "A0B0", "000"), Error);
}

TEST(InequalityFile, FixturesAreCanonical) {
    for (auto [file, scen] : {std::pair{"chain_facet", "chain"}, {"chain_quantum", "chain"}, {"triangle_nc_witness", "triangle"},
                              {"triangle_nd_witness", "triangle"}}) {
        auto s = load_scenario(fixture(std::string("scenarios/") + scen + ".scn"));
        auto text = read_text_file(fixture(std::string("inequalities/") + file + ".ineq"));
        auto n = parse_inequality(text, *s);
        EXPECT_EQ(serialize_inequality(n.inequality, *s, n.name), text) << file;
        // Primitive integer form.
        RVector c = n.inequality.coeffs;
        Rational b = n.inequality.bound;
        EXPECT_EQ(make_primitive(c, b), 1) << file;
    }
}

TEST(InequalityFile, TermForms) {
    auto s = chain();
    auto n = parse_inequality("+p(001|A0B0B1) -p(000|A0B1B2)\n2 p(010|A1B0B1)\n<= 1\n", *s);
    EXPECT_EQ(n.inequality.coeffs[coordinate_of(*s, "A0B0B1", "001")], 1);
    EXPECT_EQ(n.inequality.coeffs[coordinate_of(*s, "A0B1B2", "000")], -1);
    EXPECT_EQ(n.inequality.coeffs[coordinate_of(*s, "A1B0B1", "010")], 2);
    expect_line_error([&] { parse_inequality("+p(001|A0B0B1)\n+p(001|A0B0B1)\n<= 1\n", *s); }, 2);
    expect_line_error([&] { parse_inequality("1.5 p(001|A0B0B1)\n<= 1\n", *s); }, 1);
    expect_line_error([&] { parse_inequality("+p(001|A0B9B1)\n<= 1\n", *s); }, 1);
    EXPECT_THROW(parse_inequality("+p(001|A0B0B1)\n", *s), Error);
}

TEST(PolytopeFiles, RoundTrip) {
    auto s = chain();
    HRep h{3, {{{1, 1, 1}, 1}}, {{{-1, 0, 0}, 0}, {{0, -1, 0}, 0}, {{2, 0, -3}, Rational(1, 2)}}};
    EXPECT_EQ(parse_hrep(serialize_hrep(h)), h);
    EXPECT_EQ(serialize_hrep(parse_hrep(serialize_hrep(h))), serialize_hrep(h));
    VRep v{s->dimension(), behaviour_vectors(joint_vertices(ResponseClass::ND, ResponseClass::ND, *s))};
    EXPECT_EQ(parse_vrep(serialize_vrep(v)), v);
    expect_line_error([] { parse_hrep("hrep 2\nineq 1 <= 0\n"); }, 2);
    expect_line_error([] { parse_vrep("vrep 2\nvertex 1 x\n"); }, 2);
}

TEST(CertificateFile, RoundTrip) {
    auto s = chain();
    auto b = load_behaviour(fixture("behaviours/chain_disturbing.tbl"), s);
    for (auto cls : {ResponseClass::ND, ResponseClass::G}) {
        auto c = membership(b, joint_vertices(cls, cls, *s));
        auto back = parse_certificate(serialize_certificate(c, *s), *s);
        EXPECT_EQ(back.kind, c.kind);
        EXPECT_EQ(back.weights, c.weights);
        if (!c.is_decomposition()) {
            EXPECT_EQ(back.coeffs, c.coeffs);
            EXPECT_EQ(back.bound, c.bound);
            EXPECT_EQ(back.value, c.value);
        }
    }
}

TEST(JointFile, RoundTrip) {
    auto s = chain();
    auto text = read_text_file(fixture("behaviours/chain_disturbing.joint"));
    auto w = parse_joint(text, *s);
    EXPECT_EQ(serialize_joint(w, *s), text);
    JointDistribution pm{JointDistribution::Mode::PerMeasurement, {{{0, 1, 1, 0, 1}, Rational(1, 3)}, {{1, 1, 0, 0, 0}, Rational(2, 3)}}};
    EXPECT_EQ(parse_joint(serialize_joint(pm, *s), *s), pm);
    std::string bad = text;
    bad.replace(bad.find("1/2"), 3, "1/3");
    EXPECT_THROW(parse_joint(bad, *s), Error);
}

TEST(QuantumModelFile, RoundTripAndErrors) {
    auto s = chsh();
    std::mt19937_64 rng(3);
    SearchOptions o;
    o.restarts = 2;
    auto r = violation_search(chsh_functional(*s), *s, o);
    auto text = serialize_quantum_model(r.model, *s);
    auto m = parse_quantum_model(text, *s);
    EXPECT_EQ(serialize_quantum_model(m, *s), text);
    EXPECT_NEAR(value(chsh_functional(*s), evaluate(m, *s)), r.value, 1e-12);
    std::string missing = text.substr(0, text.rfind("projector"));
    EXPECT_THROW(parse_quantum_model(missing, *s), Error);
    std::string dims = text;
    dims.replace(dims.find("dims 2 2"), 8, "dims 2 0");
    EXPECT_THROW(parse_quantum_model(dims, *s), Error);
}

TEST(VertexCacheFile, RoundTrip) {
    auto s = chain();
    VertexCache c{scenario_hash(*s), {"L_G"}, behaviour_vectors(joint_vertices(ResponseClass::G, ResponseClass::G, *s))};
    auto text = serialize_vertex_cache(c);
    EXPECT_EQ(parse_vertex_cache(text), c);
    EXPECT_EQ(serialize_vertex_cache(parse_vertex_cache(text)), text);
}

TEST(Files, MissingFileNamesPath) {
    try {
        load_scenario("/nonexistent/x.scn");
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("/nonexistent/x.scn"), std::string::npos);
    }
}
