// Copyright (c) extbell contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "extbell/behaviour.hpp"
#include "extbell/fine.hpp"
#include "extbell/membership.hpp"
#include "extbell/polytope.hpp"
#include "extbell/quantum.hpp"
#include "extbell/scenario.hpp"
#include "extbell/vertices.hpp"

namespace extbell {

// Text formats. Every parser reports problems as Error(Input) with a line
// number; every serializer is canonical, so parse(serialize(x)) == x and
// serialize(parse(t)) == t for canonical t. Grammars are in docs/formats.md.

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

Scenario parse_scenario(std::string_view text);
std::string serialize_scenario(const Scenario& s);
ScenarioPtr load_scenario(const std::string& path);

Behaviour parse_behaviour_table(std::string_view text, const ScenarioPtr& s);
std::string serialize_behaviour_table(const Behaviour& b);
Behaviour load_behaviour(const std::string& path, const ScenarioPtr& s);

/// Position of the coordinate named "p(OUTCOMES|CONTEXTS)" (or by its row and
/// column labels).
std::size_t coordinate_of(const Scenario& s, std::string_view row, std::string_view column);
std::string coordinate_name(const Scenario& s, std::size_t position);

/// Sparse inequality: a name, one "COEF p(OUTCOMES|CONTEXTS)" term per line
/// and a closing "<= BOUND".
struct NamedInequality {
    std::string name;
    FacetInequality inequality;
};
NamedInequality parse_inequality(std::string_view text, const Scenario& s);
std::string serialize_inequality(const FacetInequality& f, const Scenario& s, const std::string& name = {});
NamedInequality load_inequality(const std::string& path, const Scenario& s);

HRep parse_hrep(std::string_view text);
std::string serialize_hrep(const HRep& h);
VRep parse_vrep(std::string_view text);
std::string serialize_vrep(const VRep& v);

/// Certificates: decomposition weights by vertex index, or a separating
/// inequality in sparse form.
std::string serialize_certificate(const Certificate& c, const Scenario& s);
Certificate parse_certificate(std::string_view text, const Scenario& s);

/// Joint distributions, one support point per line, labelled like the
/// decomposition table (one column per measurement or per context).
std::string serialize_joint(const JointDistribution& w, const Scenario& s);
JointDistribution parse_joint(std::string_view text, const Scenario& s);

/// Quantum model: dimensions, the state and every projector as rows of
/// real/imaginary pairs. Decimal notation is accepted here only.
std::string serialize_quantum_model(const QuantumModel& m, const Scenario& s);
QuantumModel parse_quantum_model(std::string_view text, const Scenario& s);

/// Vertex cache: a scenario fingerprint, the response classes and the joint
/// vertex behaviours.
struct VertexCache {
    std::string scenario_hash;
    std::vector<std::string> classes;
    std::vector<RVector> vertices;
    bool operator==(const VertexCache&) const = default;
};
std::string serialize_vertex_cache(const VertexCache& c);
VertexCache parse_vertex_cache(std::string_view text);

}  // namespace extbell
