// Copyright (c) extbell contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "extbell/behaviour.hpp"
#include "extbell/polytope.hpp"
#include "extbell/scenario.hpp"

namespace extbell {

/// Response-function class of one party.
enum class ResponseClass { NC, ND, G };

const char* to_string(ResponseClass c);
ResponseClass parse_response_class(const std::string& text);

/// One party's (possibly disturbing) local model over its own contexts, on the
/// party-local coordinates (context, outcome tuple).
struct ResponseFunction {
    ResponseClass cls = ResponseClass::G;
    RVector values;

    bool operator==(const ResponseFunction&) const = default;
};

/// Outcome tuple per context, when the function is deterministic.
std::optional<std::vector<std::size_t>> context_assignment(const Party& p, const ResponseFunction& f);
/// Outcome per measurement, when the function is deterministic and the
/// contexts agree on every shared measurement.
std::optional<std::vector<std::size_t>> measurement_assignment(const Party& p, const ResponseFunction& f);

ResponseFunction nc_vertex(const Party& p, const std::vector<std::size_t>& outcome_per_measurement);
ResponseFunction g_vertex(const Party& p, const std::vector<std::size_t>& tuple_per_context);

/// Streams one vertex per global assignment, last measurement fastest.
void for_each_nc_vertex(const Party& p, const std::function<void(const ResponseFunction&)>& f);
/// Streams one vertex per choice of tuple in every context, last context fastest.
void for_each_g_vertex(const Party& p, const std::function<void(const ResponseFunction&)>& f);

std::vector<ResponseFunction> enumerate_nc_vertices(const Party& p);
std::vector<ResponseFunction> enumerate_g_vertices(const Party& p);
/// Vertices of the party's non-disturbing polytope, by double description.
std::vector<ResponseFunction> enumerate_nd_vertices(const Party& p, const DdOptions& options = {});
std::vector<ResponseFunction> enumerate_vertices(const Party& p, ResponseClass cls, const DdOptions& options = {});

struct JointVertex {
    std::vector<std::size_t> parts;  // index into each party's vertex list
    RVector behaviour;
};

/// Cartesian product of per-party vertex lists as behaviour vectors, first
/// party slowest. For a single-party scenario only `vertices_a` is used.
std::vector<JointVertex> product_vertices(const Scenario& s, const std::vector<ResponseFunction>& vertices_a,
                                          const std::vector<ResponseFunction>& vertices_b, unsigned workers = 1);

std::vector<JointVertex> joint_vertices(ResponseClass cls_a, ResponseClass cls_b, const Scenario& s,
                                        unsigned workers = 1, const DdOptions& options = {});

/// Behaviour vectors of a vertex list.
std::vector<RVector> behaviour_vectors(const std::vector<JointVertex>& v);

}  // namespace extbell
