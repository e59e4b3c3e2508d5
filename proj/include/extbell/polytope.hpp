// Copyright (c) extbell contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "extbell/error.hpp"
#include "extbell/rational.hpp"

namespace extbell {

/// coeffs . x (= or <=) rhs, depending on which list of an HRep it lives in.
struct LinearConstraint {
    RVector coeffs;
    Rational rhs;

    bool operator==(const LinearConstraint&) const = default;
};

/// Polyhedron {x : E x = e, A x <= b}.
struct HRep {
    std::size_t dimension = 0;
    std::vector<LinearConstraint> equalities;
    std::vector<LinearConstraint> inequalities;

    /// Scales every row to primitive integers, orients equalities (first
    /// non-zero coefficient positive), drops trivial rows and duplicates, sorts.
    void canonicalize();
    bool operator==(const HRep&) const = default;
};

struct VRep {
    std::size_t dimension = 0;
    std::vector<RVector> vertices;

    /// Removes duplicate vertices and sorts lexicographically.
    void canonicalize();
    bool operator==(const VRep&) const = default;
};

/// A linear inequality coeffs . x <= bound on behaviour coordinates, kept in
/// primitive integer scaling.
struct FacetInequality {
    RVector coeffs;
    Rational bound;
    std::string provenance;

    static FacetInequality from(RVector coeffs, Rational bound, std::string provenance = {});
    Rational evaluate(std::span<const Rational> x) const { return dot(coeffs, x); }
};

/// Order in which the double description inserts constraints.
enum class InsertionOrder {
    MostViolated,   // row cutting the most current rays first, lowest index on ties
    Lexicographic,  // rows in input order
};

enum class AdjacencyTest {
    Combinatorial,  // zero-set inclusion against all other rays
    Algebraic,      // rank of the common tight rows
};

struct DdOptions {
    std::size_t max_rays = 2'000'000;
    InsertionOrder order = InsertionOrder::MostViolated;
    AdjacencyTest adjacency = AdjacencyTest::Combinatorial;
};

struct DdProgress {
    std::size_t rows_processed = 0;
    std::size_t rows_total = 0;
    std::size_t rays = 0;
};

class ResourceLimitError : public Error {
  public:
    ResourceLimitError(const std::string& what, DdProgress progress)
        : Error(ErrorKind::Resource, what), progress_(progress) {}
    const DdProgress& progress() const { return progress_; }

  private:
    DdProgress progress_;
};

/// Raised by facets_to_vertices when the system has no solution. `farkas`
/// holds multipliers y over [equalities; inequalities] with y_ineq >= 0,
/// y^T [E; A] = 0 and y^T [e; b] < 0.
class EmptyPolytopeError : public Error {
  public:
    EmptyPolytopeError(const std::string& what, RVector farkas)
        : Error(ErrorKind::Empty, what), farkas_(std::move(farkas)) {}
    const RVector& farkas() const { return farkas_; }

  private:
    RVector farkas_;
};

/// Extreme rays of the pointed cone {x in Q^dim : row . x >= 0 for every row}.
/// Rays are primitive integer vectors, sorted. Throws Unbounded when the rows
/// do not span Q^dim (the cone then contains a line).
std::vector<IVector> extreme_rays(const std::vector<IVector>& rows, std::size_t dim, const DdOptions& options = {});

/// Facets and affine-hull equalities of conv(v). Facets are reported in the
/// reduced normal form: supported on the affine basis coordinates only.
HRep vertices_to_facets(const VRep& v, const DdOptions& options = {});

/// Equalities of the affine hull of a non-empty point set, in the form
/// vertices_to_facets reports them.
std::vector<LinearConstraint> affine_hull(const VRep& v);

/// Vertex set of a bounded non-empty polyhedron.
VRep facets_to_vertices(const HRep& h, const DdOptions& options = {});

HRep intersect(const HRep& h1, const HRep& h2);

/// Reduces an inequality modulo the equalities of `h` (eliminating the
/// dependent coordinates) and scales the result to primitive integers, so two
/// inequalities defining the same halfspace inside aff(h) compare equal.
LinearConstraint reduce_modulo_equalities(const LinearConstraint& ineq, const std::vector<LinearConstraint>& equalities);

/// True when `ineq` coincides with one of the inequalities of `h` modulo its
/// equalities (same facet up to positive scaling).
bool contains_facet(const HRep& h, const LinearConstraint& ineq);

/// Affine dimension of a point set (-1 for the empty set).
long affine_dimension(const std::vector<RVector>& points);

/// Checks validity and tightness of an inequality against a vertex list.
struct FacetCheck {
    bool valid = false;          // holds on every vertex
    std::size_t tight = 0;       // vertices where it holds with equality
    long tight_dimension = -1;   // affine dimension of the tight vertices
    long polytope_dimension = -1;
    Rational max_value;          // maximum of coeffs . v over the vertices

    bool is_facet() const { return valid && tight_dimension + 1 == polytope_dimension; }
};
FacetCheck check_facet(const LinearConstraint& ineq, const std::vector<RVector>& vertices);

}  // namespace extbell
