// Copyright (c) extbell contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>
#include <vector>

#include "extbell/behaviour.hpp"
#include "extbell/lp.hpp"
#include "extbell/polytope.hpp"
#include "extbell/vertices.hpp"

namespace extbell {

/// Witness of a membership query against conv(V).
struct Certificate {
    enum class Kind { Decomposition, Separation };
    Kind kind = Kind::Decomposition;
    // Decomposition: (vertex index, weight) pairs, weights positive and summing to one.
    std::vector<std::pair<std::size_t, Rational>> weights;
    // Separation: coeffs . v <= bound on every vertex, coeffs . point = value > bound.
    RVector coeffs;
    Rational bound;
    Rational value;

    bool is_decomposition() const { return kind == Kind::Decomposition; }
};

/// Decides point in conv(vertices) by exact LP and verifies the answer.
Certificate membership(const RVector& point, const std::vector<RVector>& vertices);
Certificate membership(const Behaviour& b, const std::vector<JointVertex>& vertices);
/// Single-party query: a marginal against response functions of its party.
Certificate membership(const MarginalBehaviour& m, const std::vector<ResponseFunction>& vertices);

/// Exact re-check; false means the certificate does not prove what it claims.
bool verify(const Certificate& c, const RVector& point, const std::vector<RVector>& vertices);

struct Maximum {
    Rational value;
    RVector point;
};

/// Maximum of f over the polyhedron h. Throws Empty or Unbounded errors.
Maximum maximize_over_set(const FacetInequality& f, const HRep& h);

/// Maximum of f over conv(vertices) intersected with extra equalities and
/// inequalities (coeffs . x <= rhs).
Maximum maximize_over_hull(const FacetInequality& f, const std::vector<RVector>& vertices,
                           const std::vector<LinearConstraint>& equalities = {},
                           const std::vector<LinearConstraint>& inequalities = {});

Rational evaluate(const FacetInequality& f, const Behaviour& b);

}  // namespace extbell
