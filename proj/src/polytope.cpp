// Copyright (c) extbell contributors.
// SPDX-License-Identifier: Apache-2.0
#include "extbell/polytope.hpp"

#include <algorithm>
#include <bit>
#include <climits>
#include <cstdlib>
#include <cstdint>
#include <numeric>

#include "extbell/linalg.hpp"
#include "extbell/lp.hpp"

namespace extbell {

namespace {

class Bits {
  public:
    explicit Bits(std::size_t n = 0) : words_((n + 63) / 64, 0) {}
    void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
    bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }
    Bits operator&(const Bits& o) const {
        Bits r;
        r.words_.resize(words_.size());
        for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] = words_[i] & o.words_[i];
        return r;
    }
    std::size_t count_and(const Bits& o) const {
        std::size_t c = 0;
        for (std::size_t i = 0; i < words_.size(); ++i) c += static_cast<std::size_t>(std::popcount(words_[i] & o.words_[i]));
        return c;
    }
    // Intersects this set with o in place.
    void keep(const Bits& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    }
    // Calls f(i) for every set bit i.
    template <class F>
    void each(F&& f) const {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            for (std::uint64_t x = words_[w]; x != 0; x &= x - 1) f(w * 64 + static_cast<std::size_t>(std::countr_zero(x)));
        }
    }

  private:
    std::vector<std::uint64_t> words_;
};

// Integer vector with a machine-word copy when every entry fits in 31 bits;
// dot products of two such copies cannot overflow a 128-bit accumulator.
struct Packed {
    IVector v;
    std::vector<std::int64_t> small;

    explicit Packed(IVector x = {}) : v(std::move(x)) {
        small.reserve(v.size());
        for (const auto& q : v) {
            if (!q.fits_slong_p() || std::abs(q.get_si()) >= (1L << 31)) {
                small.clear();
                return;
            }
            small.push_back(q.get_si());
        }
    }
};

struct Ray {
    Packed p;
    Bits zero;
    Bits below;  // rows still to insert that this ray violates (most-violated order only)
};

Integer idot(const IVector& a, const IVector& b) {
    Integer s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (sgn(a[i]) != 0 && sgn(b[i]) != 0) mpz_addmul(s.get_mpz_t(), a[i].get_mpz_t(), b[i].get_mpz_t());
    }
    return s;
}

int sign_dot(const Packed& a, const Packed& b) {
    if (a.small.empty() || b.small.empty() || a.v.empty()) return sgn(idot(a.v, b.v));
    __int128 s = 0;
    for (std::size_t i = 0; i < a.small.size(); ++i) s += static_cast<__int128>(a.small[i]) * b.small[i];
    return (s > 0) - (s < 0);
}

Integer packed_dot(const Packed& a, const Packed& b) {
    if (a.small.empty() || b.small.empty() || a.v.empty()) return idot(a.v, b.v);
    __int128 s = 0;
    for (std::size_t i = 0; i < a.small.size(); ++i) s += static_cast<__int128>(a.small[i]) * b.small[i];
    if (s >= INT64_MIN && s <= INT64_MAX) return Integer(static_cast<long>(s));
    return idot(a.v, b.v);
}

bool lex_less(const IVector& a, const IVector& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        int c = cmp(a[i], b[i]);
        if (c != 0) return c < 0;
    }
    return false;
}

// Greedy choice of `dim` linearly independent rows, in index order.
std::vector<std::size_t> independent_rows(const std::vector<IVector>& rows, std::size_t dim) {
    std::vector<std::size_t> chosen;
    RMatrix basis;  // kept in echelon form
    std::vector<std::size_t> pivots;
    for (std::size_t i = 0; i < rows.size() && chosen.size() < dim; ++i) {
        RVector r = to_rationals(rows[i]);
        for (std::size_t k = 0; k < basis.size(); ++k) {
            const Rational f = r[pivots[k]];
            if (sgn(f) == 0) continue;
            for (std::size_t j = 0; j < dim; ++j) {
                if (sgn(basis[k][j]) != 0) r[j] -= f * basis[k][j];
            }
        }
        std::size_t p = 0;
        while (p < dim && sgn(r[p]) == 0) ++p;
        if (p == dim) continue;
        Rational inv = 1 / r[p];
        for (auto& q : r) q *= inv;
        // keep earlier basis rows reduced in the new pivot column
        for (auto& b : basis) {
            const Rational f = b[p];
            if (sgn(f) == 0) continue;
            for (std::size_t j = 0; j < dim; ++j) b[j] -= f * r[j];
        }
        basis.push_back(std::move(r));
        pivots.push_back(p);
        chosen.push_back(i);
    }
    return chosen;
}

// Columns of the inverse of the square matrix formed by `rows`, as primitive integer vectors.
std::vector<IVector> inverse_columns(const std::vector<IVector>& rows, const std::vector<std::size_t>& chosen,
                                     std::size_t dim) {
    RMatrix aug;
    for (auto i : chosen) {
        RVector r = to_rationals(rows[i]);
        r.resize(2 * dim, 0);
        r[dim + aug.size()] = 1;
        aug.push_back(std::move(r));
    }
    RowEchelon e = rref(std::move(aug), 2 * dim);
    std::vector<IVector> cols;
    for (std::size_t j = 0; j < dim; ++j) {
        RVector c(dim);
        for (std::size_t i = 0; i < dim; ++i) c[i] = e.rows[i][dim + j];
        make_primitive(c);
        cols.push_back(to_integers(c));
    }
    return cols;
}

}  // namespace

std::vector<IVector> extreme_rays(const std::vector<IVector>& rows, std::size_t dim, const DdOptions& options) {
    const std::size_t m = rows.size();
    auto chosen = independent_rows(rows, dim);
    if (chosen.size() < dim) {
        throw Error(ErrorKind::Unbounded, "constraint rows have rank " + std::to_string(chosen.size()) +
                                              " < " + std::to_string(dim) + "; the cone is not pointed");
    }
    auto cols = inverse_columns(rows, chosen, dim);
    std::vector<Packed> packed;
    packed.reserve(m);
    for (const auto& r : rows) packed.emplace_back(r);

    std::vector<Ray> rays;
    for (std::size_t j = 0; j < dim; ++j) {
        Ray r{Packed(cols[j]), Bits(m), Bits(m)};
        for (std::size_t k = 0; k < dim; ++k) {
            if (k != j) r.zero.set(chosen[k]);
        }
        rays.push_back(std::move(r));
    }
    std::vector<bool> processed(m, false);
    for (auto i : chosen) processed[i] = true;
    std::vector<std::size_t> remaining;
    for (std::size_t i = 0; i < m; ++i) {
        if (!processed[i]) remaining.push_back(i);
    }

    // violated[i]: number of current rays cutting row i, kept up to date as rays come and go.
    const bool track = options.order == InsertionOrder::MostViolated;
    std::vector<std::size_t> violated(m, 0);
    auto note = [&](Ray& r, int delta) {
        if (!track) return;
        if (delta > 0) {
            for (auto i : remaining)
                if (sign_dot(packed[i], r.p) < 0) r.below.set(i);
        }
        for (auto i : remaining)
            if (r.below.test(i)) violated[i] += delta;
    };
    for (auto& r : rays) note(r, 1);

    DdProgress progress{dim, m, rays.size()};
    std::vector<Integer> values;
    while (!remaining.empty()) {
        std::size_t pick = 0;
        if (track) {
            for (std::size_t idx = 1; idx < remaining.size(); ++idx)
                if (violated[remaining[idx]] > violated[remaining[pick]]) pick = idx;
        }
        const std::size_t row = remaining[pick];
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));

        values.resize(rays.size());
        std::vector<std::size_t> pos, neg;
        for (std::size_t k = 0; k < rays.size(); ++k) {
            values[k] = packed_dot(packed[row], rays[k].p);
            int s = sgn(values[k]);
            if (s > 0) pos.push_back(k);
            else if (s < 0) neg.push_back(k);
            else rays[k].zero.set(row);
        }
        processed[row] = true;
        ++progress.rows_processed;
        if (neg.empty()) continue;

        // tight_rays[i]: rays lying on row i. Two rays are adjacent when no third
        // ray lies on every row they share.
        std::vector<Bits> tight_rays;
        if (options.adjacency == AdjacencyTest::Combinatorial) {
            tight_rays.assign(m, Bits(rays.size()));
            for (std::size_t k = 0; k < rays.size(); ++k) rays[k].zero.each([&](std::size_t i) { tight_rays[i].set(k); });
        }
        std::vector<Ray> created;
        for (auto p : pos) {
            for (auto n : neg) {
                if (rays[p].zero.count_and(rays[n].zero) + 2 < dim) continue;
                Bits common = rays[p].zero & rays[n].zero;
                bool adjacent = true;
                if (options.adjacency == AdjacencyTest::Combinatorial) {
                    Bits on_all(rays.size());
                    bool first = true;
                    common.each([&](std::size_t i) {
                        if (first) on_all = tight_rays[i];
                        else on_all.keep(tight_rays[i]);
                        first = false;
                    });
                    adjacent = first ? rays.size() == 2 : on_all.count() == 2;
                }
                if (options.adjacency == AdjacencyTest::Algebraic) {
                    RMatrix tight;
                    for (std::size_t i = 0; i < m; ++i) {
                        if (common.test(i)) tight.push_back(to_rationals(rows[i]));
                    }
                    adjacent = rank(tight, dim) + 2 == dim;
                }
                if (!adjacent) continue;
                IVector v(dim);
                Integer a = values[p];
                Integer b = -values[n];
                for (std::size_t j = 0; j < dim; ++j) v[j] = a * rays[n].p.v[j] + b * rays[p].p.v[j];
                make_primitive(v);
                Bits z = common;
                z.set(row);
                created.push_back(Ray{Packed(std::move(v)), std::move(z), Bits(m)});
            }
        }
        std::vector<Ray> next;
        next.reserve(rays.size() - neg.size() + created.size());
        for (std::size_t k = 0; k < rays.size(); ++k) {
            if (sgn(values[k]) >= 0) next.push_back(std::move(rays[k]));
            else note(rays[k], -1);
        }
        for (auto& r : created) {
            note(r, 1);
            next.push_back(std::move(r));
        }
        rays = std::move(next);
        progress.rays = rays.size();
        if (rays.size() > options.max_rays) {
            throw ResourceLimitError("double description exceeded " + std::to_string(options.max_rays) +
                                         " intermediate rays after " + std::to_string(progress.rows_processed) +
                                         " of " + std::to_string(m) + " rows",
                                     progress);
        }
    }
    std::vector<IVector> out;
    out.reserve(rays.size());
    for (auto& r : rays) out.push_back(std::move(r.p.v));
    std::sort(out.begin(), out.end(), lex_less);
    return out;
}

void HRep::canonicalize() {
    auto orient = [](LinearConstraint& c) {
        for (const auto& q : c.coeffs) {
            if (sgn(q) == 0) continue;
            if (sgn(q) < 0) {
                for (auto& x : c.coeffs) x = -x;
                c.rhs = -c.rhs;
            }
            break;
        }
    };
    auto less = [](const LinearConstraint& a, const LinearConstraint& b) {
        int c = lex_compare(a.coeffs, b.coeffs);
        if (c != 0) return c < 0;
        return a.rhs < b.rhs;
    };
    std::vector<LinearConstraint> eqs;
    for (auto& e : equalities) {
        make_primitive(e.coeffs, e.rhs);
        if (is_zero(e.coeffs) && sgn(e.rhs) == 0) continue;
        orient(e);
        eqs.push_back(std::move(e));
    }
    std::sort(eqs.begin(), eqs.end(), less);
    eqs.erase(std::unique(eqs.begin(), eqs.end()), eqs.end());
    equalities = std::move(eqs);

    std::vector<LinearConstraint> ineqs;
    for (auto& c : inequalities) {
        make_primitive(c.coeffs, c.rhs);
        if (is_zero(c.coeffs) && sgn(c.rhs) >= 0) continue;
        ineqs.push_back(std::move(c));
    }
    std::sort(ineqs.begin(), ineqs.end(), less);
    ineqs.erase(std::unique(ineqs.begin(), ineqs.end()), ineqs.end());
    inequalities = std::move(ineqs);
}

void VRep::canonicalize() {
    auto less = [](const RVector& a, const RVector& b) { return lex_compare(a, b) < 0; };
    std::sort(vertices.begin(), vertices.end(), less);
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
}

FacetInequality FacetInequality::from(RVector coeffs, Rational bound, std::string provenance) {
    make_primitive(coeffs, bound);
    return FacetInequality{std::move(coeffs), std::move(bound), std::move(provenance)};
}

namespace {

std::vector<LinearConstraint> hull_equalities(const RMatrix& homogenized, std::size_t d) {
    std::vector<LinearConstraint> out;
    for (auto& z : nullspace(homogenized, d + 1)) out.push_back({RVector(z.begin() + 1, z.end()), -z[0]});
    return out;
}

}  // namespace

std::vector<LinearConstraint> affine_hull(const VRep& v) {
    RMatrix w;
    for (const auto& x : v.vertices) {
        RVector row{Rational(1)};
        row.insert(row.end(), x.begin(), x.end());
        w.push_back(std::move(row));
    }
    HRep h{v.dimension, hull_equalities(w, v.dimension), {}};
    h.canonicalize();
    return h.equalities;
}

HRep vertices_to_facets(const VRep& v, const DdOptions& options) {
    if (v.vertices.empty()) throw Error(ErrorKind::Input, "vertices_to_facets: empty vertex list");
    const std::size_t d = v.dimension;
    RMatrix w;
    for (const auto& x : v.vertices) {
        if (x.size() != d) throw Error(ErrorKind::Input, "vertices_to_facets: vertex of wrong dimension");
        RVector row;
        row.reserve(d + 1);
        row.emplace_back(1);
        row.insert(row.end(), x.begin(), x.end());
        w.push_back(std::move(row));
    }
    RowEchelon e = rref(w, d + 1);
    HRep out;
    out.dimension = d;
    out.equalities = hull_equalities(w, d);
    const auto& piv = e.pivots;
    const std::size_t r = piv.size();
    std::vector<IVector> reduced;
    for (const auto& row : w) {
        RVector u(r);
        for (std::size_t k = 0; k < r; ++k) u[k] = row[piv[k]];
        make_primitive(u);
        reduced.push_back(to_integers(u));
    }
    auto rays = extreme_rays(reduced, r, options);
    for (const auto& h : rays) {
        LinearConstraint f{RVector(d, 0), Rational(h[0])};
        for (std::size_t k = 1; k < r; ++k) f.coeffs[piv[k] - 1] = -Rational(h[k]);
        if (is_zero(f.coeffs)) continue;
        out.inequalities.push_back(reduce_modulo_equalities(f, out.equalities));
    }
    out.canonicalize();
    return out;
}

namespace {

[[noreturn]] void throw_empty(const HRep& h) {
    LPProblem lp;
    lp.num_vars = h.dimension;
    lp.objective.assign(h.dimension, 0);
    lp.sense = Sense::Feasibility;
    lp.lower.assign(h.dimension, std::nullopt);
    lp.upper.assign(h.dimension, std::nullopt);
    for (const auto& e : h.equalities) lp.rows.push_back({e.coeffs, Relation::Equal, e.rhs});
    for (const auto& c : h.inequalities) lp.rows.push_back({c.coeffs, Relation::LessEq, c.rhs});
    LPResult res = solve(lp);
    if (res.status != LPStatus::Infeasible) {
        throw Error(ErrorKind::Verification, "facets_to_vertices: DD found no vertex but the LP is feasible");
    }
    throw EmptyPolytopeError("polytope is empty (Farkas certificate attached)", std::move(res.farkas));
}

}  // namespace

VRep facets_to_vertices(const HRep& h, const DdOptions& options) {
    const std::size_t d = h.dimension;
    RMatrix emat;
    RVector erhs;
    for (const auto& e : h.equalities) {
        if (e.coeffs.size() != d) throw Error(ErrorKind::Input, "facets_to_vertices: equality of wrong dimension");
        emat.push_back(e.coeffs);
        erhs.push_back(e.rhs);
    }
    RVector x0(d, 0);
    if (!emat.empty() && !solve_particular(emat, erhs, d, x0)) throw_empty(h);
    RMatrix basis = emat.empty() ? RMatrix{} : nullspace(emat, d);
    if (emat.empty()) {
        for (std::size_t j = 0; j < d; ++j) {
            RVector z(d, 0);
            z[j] = 1;
            basis.push_back(std::move(z));
        }
    }
    const std::size_t k = basis.size();
    std::vector<IVector> rows;
    for (const auto& c : h.inequalities) {
        if (c.coeffs.size() != d) throw Error(ErrorKind::Input, "facets_to_vertices: inequality of wrong dimension");
        RVector row(k + 1);
        row[0] = c.rhs - dot(c.coeffs, x0);
        for (std::size_t j = 0; j < k; ++j) row[j + 1] = -dot(c.coeffs, basis[j]);
        if (is_zero(row)) continue;
        make_primitive(row);
        rows.push_back(to_integers(row));
    }
    IVector s_row(k + 1, 0);
    s_row[0] = 1;
    rows.push_back(std::move(s_row));

    std::vector<IVector> rays;
    try {
        rays = extreme_rays(rows, k + 1, options);
    } catch (const Error& err) {
        if (err.kind() != ErrorKind::Unbounded) throw;
        // a line in the cone: either the polyhedron is empty or it is unbounded
        LPProblem lp;
        lp.num_vars = d;
        lp.objective.assign(d, 0);
        lp.sense = Sense::Feasibility;
        lp.lower.assign(d, std::nullopt);
        lp.upper.assign(d, std::nullopt);
        for (const auto& e : h.equalities) lp.rows.push_back({e.coeffs, Relation::Equal, e.rhs});
        for (const auto& c : h.inequalities) lp.rows.push_back({c.coeffs, Relation::LessEq, c.rhs});
        if (solve(lp).status == LPStatus::Infeasible) throw_empty(h);
        throw Error(ErrorKind::Unbounded, "facets_to_vertices: polyhedron contains a line");
    }
    VRep out;
    out.dimension = d;
    bool unbounded = false;
    for (const auto& r : rays) {
        if (sgn(r[0]) == 0) {
            unbounded = true;
            continue;
        }
        RVector x = x0;
        Rational s(r[0]);
        for (std::size_t j = 0; j < k; ++j) {
            if (sgn(r[j + 1]) == 0) continue;
            Rational t = Rational(r[j + 1]) / s;
            for (std::size_t i = 0; i < d; ++i) {
                if (sgn(basis[j][i]) != 0) x[i] += t * basis[j][i];
            }
        }
        out.vertices.push_back(std::move(x));
    }
    if (out.vertices.empty()) throw_empty(h);
    if (unbounded) throw Error(ErrorKind::Unbounded, "facets_to_vertices: polyhedron is unbounded");
    out.canonicalize();
    return out;
}

HRep intersect(const HRep& h1, const HRep& h2) {
    if (h1.dimension != h2.dimension) {
        throw Error(ErrorKind::Input, "intersect: dimension mismatch " + std::to_string(h1.dimension) + " vs " +
                                          std::to_string(h2.dimension));
    }
    HRep out = h1;
    out.equalities.insert(out.equalities.end(), h2.equalities.begin(), h2.equalities.end());
    out.inequalities.insert(out.inequalities.end(), h2.inequalities.begin(), h2.inequalities.end());
    out.canonicalize();
    return out;
}

LinearConstraint reduce_modulo_equalities(const LinearConstraint& ineq, const std::vector<LinearConstraint>& equalities) {
    LinearConstraint out = ineq;
    const std::size_t d = ineq.coeffs.size();
    if (!equalities.empty()) {
        RMatrix m;
        for (const auto& e : equalities) {
            RVector row = e.coeffs;
            row.push_back(e.rhs);
            m.push_back(std::move(row));
        }
        RowEchelon ech = rref(std::move(m), d + 1);
        for (std::size_t k = 0; k < ech.rank(); ++k) {
            std::size_t p = ech.pivots[k];
            if (p >= d) continue;  // inconsistent equality system; nothing to eliminate
            const Rational f = out.coeffs[p];
            if (sgn(f) == 0) continue;
            for (std::size_t j = 0; j < d; ++j) {
                if (sgn(ech.rows[k][j]) != 0) out.coeffs[j] -= f * ech.rows[k][j];
            }
            out.rhs -= f * ech.rows[k][d];
        }
    }
    make_primitive(out.coeffs, out.rhs);
    return out;
}

bool contains_facet(const HRep& h, const LinearConstraint& ineq) {
    LinearConstraint target = reduce_modulo_equalities(ineq, h.equalities);
    for (const auto& f : h.inequalities) {
        if (reduce_modulo_equalities(f, h.equalities) == target) return true;
    }
    return false;
}

long affine_dimension(const std::vector<RVector>& points) {
    if (points.empty()) return -1;
    RMatrix w;
    for (const auto& p : points) {
        RVector row;
        row.emplace_back(1);
        row.insert(row.end(), p.begin(), p.end());
        w.push_back(std::move(row));
    }
    return static_cast<long>(rank(w, points.front().size() + 1)) - 1;
}

FacetCheck check_facet(const LinearConstraint& ineq, const std::vector<RVector>& vertices) {
    FacetCheck out;
    out.valid = true;
    std::vector<RVector> tight;
    bool first = true;
    for (const auto& v : vertices) {
        Rational val = dot(ineq.coeffs, v);
        if (first || val > out.max_value) out.max_value = val;
        first = false;
        if (val > ineq.rhs) out.valid = false;
        if (val == ineq.rhs) tight.push_back(v);
    }
    out.tight = tight.size();
    out.tight_dimension = affine_dimension(tight);
    out.polytope_dimension = affine_dimension(vertices);
    return out;
}

}  // namespace extbell
