// Copyright (c) extbell contributors.
// SPDX-License-Identifier: Apache-2.0
#include "extbell/membership.hpp"

namespace extbell {

namespace {

// Feasibility of point = sum_k c_k v_k, sum_k c_k = 1, c >= 0.
LPProblem hull_problem(const RVector& point, const std::vector<RVector>& vertices) {
    const std::size_t n = vertices.size();
    const std::size_t d = point.size();
    LPProblem p;
    p.num_vars = n;
    p.sense = Sense::Feasibility;
    for (std::size_t i = 0; i < d; ++i) {
        LPRow row{RVector(n), Relation::Equal, point[i]};
        for (std::size_t k = 0; k < n; ++k) row.coeffs[k] = vertices[k][i];
        p.rows.push_back(std::move(row));
    }
    p.rows.push_back(LPRow{RVector(n, 1), Relation::Equal, 1});
    return p;
}

}  // namespace

Certificate membership(const RVector& point, const std::vector<RVector>& vertices) {
    if (vertices.empty()) throw Error(ErrorKind::Input, "membership: empty vertex list");
    for (const auto& v : vertices) {
        if (v.size() != point.size()) throw Error(ErrorKind::Input, "membership: coordinate mismatch");
    }
    LPProblem p = hull_problem(point, vertices);
    LPResult r = solve(p);
    Certificate c;
    if (r.status == LPStatus::Optimal) {
        c.kind = Certificate::Kind::Decomposition;
        for (std::size_t k = 0; k < r.primal.size(); ++k) {
            if (sgn(r.primal[k]) != 0) c.weights.emplace_back(k, r.primal[k]);
        }
    } else {
        // y over the coordinate rows and the sum row: y.v_k + y_s >= 0 for all k
        // and y.point + y_s < 0, so (-y) . x <= y_s separates.
        c.kind = Certificate::Kind::Separation;
        const std::size_t d = point.size();
        c.coeffs.resize(d);
        for (std::size_t i = 0; i < d; ++i) c.coeffs[i] = -r.farkas[i];
        c.bound = r.farkas[d];
        make_primitive(c.coeffs, c.bound);
        c.value = dot(c.coeffs, point);
    }
    if (!verify(c, point, vertices)) {
        throw Error(ErrorKind::Verification, "membership: certificate failed exact re-check");
    }
    return c;
}

Certificate membership(const Behaviour& b, const std::vector<JointVertex>& vertices) {
    return membership(b.values(), behaviour_vectors(vertices));
}

Certificate membership(const MarginalBehaviour& m, const std::vector<ResponseFunction>& vertices) {
    std::vector<RVector> v;
    for (const auto& f : vertices) v.push_back(f.values);
    return membership(m.values(), v);
}

bool verify(const Certificate& c, const RVector& point, const std::vector<RVector>& vertices) {
    if (c.kind == Certificate::Kind::Decomposition) {
        if (c.weights.empty()) return false;
        RVector sum(point.size(), 0);
        Rational total = 0;
        for (const auto& [k, w] : c.weights) {
            if (k >= vertices.size() || sgn(w) <= 0) return false;
            total += w;
            for (std::size_t i = 0; i < point.size(); ++i) sum[i] += w * vertices[k][i];
        }
        return total == 1 && sum == point;
    }
    if (c.coeffs.size() != point.size()) return false;
    for (const auto& v : vertices) {
        if (dot(c.coeffs, v) > c.bound) return false;
    }
    return dot(c.coeffs, point) == c.value && c.value > c.bound;
}

Maximum maximize_over_set(const FacetInequality& f, const HRep& h) {
    if (f.coeffs.size() != h.dimension) throw Error(ErrorKind::Input, "maximize_over_set: dimension mismatch");
    LPProblem p;
    p.num_vars = h.dimension;
    p.sense = Sense::Maximize;
    p.objective = f.coeffs;
    p.lower.assign(h.dimension, std::nullopt);
    p.upper.assign(h.dimension, std::nullopt);
    for (const auto& e : h.equalities) p.rows.push_back({e.coeffs, Relation::Equal, e.rhs});
    for (const auto& c : h.inequalities) p.rows.push_back({c.coeffs, Relation::LessEq, c.rhs});
    LPResult r = solve(p);
    if (r.status == LPStatus::Infeasible) throw Error(ErrorKind::Empty, "maximize_over_set: the set is empty");
    if (r.status == LPStatus::Unbounded) throw Error(ErrorKind::Unbounded, "maximize_over_set: the set is unbounded");
    return Maximum{r.value, r.primal};
}

Maximum maximize_over_hull(const FacetInequality& f, const std::vector<RVector>& vertices,
                           const std::vector<LinearConstraint>& equalities,
                           const std::vector<LinearConstraint>& inequalities) {
    if (vertices.empty()) throw Error(ErrorKind::Empty, "maximize_over_hull: no vertices");
    const std::size_t n = vertices.size();
    const std::size_t d = f.coeffs.size();
    LPProblem p;
    p.num_vars = n;
    p.sense = Sense::Maximize;
    for (const auto& v : vertices) p.objective.push_back(dot(f.coeffs, v));
    p.rows.push_back(LPRow{RVector(n, 1), Relation::Equal, 1});
    for (const auto& e : equalities) {
        LPRow row{RVector(n), Relation::Equal, e.rhs};
        for (std::size_t k = 0; k < n; ++k) row.coeffs[k] = dot(e.coeffs, vertices[k]);
        p.rows.push_back(std::move(row));
    }
    for (const auto& c : inequalities) {
        LPRow row{RVector(n), Relation::LessEq, c.rhs};
        for (std::size_t k = 0; k < n; ++k) row.coeffs[k] = dot(c.coeffs, vertices[k]);
        p.rows.push_back(std::move(row));
    }
    LPResult r = solve(p);
    if (r.status != LPStatus::Optimal) throw Error(ErrorKind::Empty, "maximize_over_hull: the set is empty");
    Maximum m{r.value, RVector(d, 0)};
    for (std::size_t k = 0; k < n; ++k) {
        if (sgn(r.primal[k]) == 0) continue;
        for (std::size_t i = 0; i < d; ++i) m.point[i] += r.primal[k] * vertices[k][i];
    }
    return m;
}

Rational evaluate(const FacetInequality& f, const Behaviour& b) {
    if (f.coeffs.size() != b.size()) throw Error(ErrorKind::Input, "evaluate: coordinate mismatch");
    return dot(f.coeffs, b.values());
}

}  // namespace extbell
