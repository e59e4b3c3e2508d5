// Copyright (c) extbell contributors.
// SPDX-License-Identifier: Apache-2.0
#include "extbell/vertices.hpp"

#include <algorithm>
#include <cctype>
#include <thread>

namespace extbell {

const char* to_string(ResponseClass c) {
    switch (c) {
        case ResponseClass::NC: return "NC";
        case ResponseClass::ND: return "ND";
        case ResponseClass::G: return "G";
    }
    return "?";
}

ResponseClass parse_response_class(const std::string& text) {
    std::string t = text;
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::toupper(c); });
    if (t == "NC") return ResponseClass::NC;
    if (t == "ND") return ResponseClass::ND;
    if (t == "G") return ResponseClass::G;
    throw Error(ErrorKind::Input, "unknown response-function class '" + text + "' (expected NC, ND or G)");
}

std::optional<std::vector<std::size_t>> context_assignment(const Party& p, const ResponseFunction& f) {
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < p.contexts().size(); ++c) {
        std::optional<std::size_t> hit;
        for (std::size_t t = 0; t < p.tuple_count(c); ++t) {
            const Rational& v = f.values[p.local_offset(c) + t];
            if (v == 1) hit = t;
            else if (sgn(v) != 0) return std::nullopt;
        }
        if (!hit) return std::nullopt;
        out.push_back(*hit);
    }
    return out;
}

std::optional<std::vector<std::size_t>> measurement_assignment(const Party& p, const ResponseFunction& f) {
    auto ctx = context_assignment(p, f);
    if (!ctx) return std::nullopt;
    std::vector<std::optional<std::size_t>> seen(p.measurements().size());
    for (std::size_t c = 0; c < p.contexts().size(); ++c) {
        auto outcomes = p.decode_tuple(c, (*ctx)[c]);
        for (std::size_t k = 0; k < outcomes.size(); ++k) {
            auto& slot = seen[p.contexts()[c][k]];
            if (slot && *slot != outcomes[k]) return std::nullopt;
            slot = outcomes[k];
        }
    }
    std::vector<std::size_t> out;
    for (auto& s : seen) out.push_back(*s);
    return out;
}

ResponseFunction nc_vertex(const Party& p, const std::vector<std::size_t>& outcome_per_measurement) {
    ResponseFunction f{ResponseClass::NC, RVector(p.local_dimension(), 0)};
    for (std::size_t c = 0; c < p.contexts().size(); ++c) {
        std::vector<std::size_t> outcomes;
        for (auto m : p.contexts()[c]) outcomes.push_back(outcome_per_measurement[m]);
        f.values[p.local_offset(c) + p.encode_tuple(c, outcomes)] = 1;
    }
    return f;
}

ResponseFunction g_vertex(const Party& p, const std::vector<std::size_t>& tuple_per_context) {
    ResponseFunction f{ResponseClass::G, RVector(p.local_dimension(), 0)};
    for (std::size_t c = 0; c < p.contexts().size(); ++c) f.values[p.local_offset(c) + tuple_per_context[c]] = 1;
    return f;
}

namespace {

// Visits every vector in the mixed-radix box `radix`, last digit fastest.
void for_each_digits(const std::vector<std::size_t>& radix, const std::function<void(const std::vector<std::size_t>&)>& f) {
    std::vector<std::size_t> digits(radix.size(), 0);
    while (true) {
        f(digits);
        std::size_t k = radix.size();
        while (k > 0) {
            --k;
            if (++digits[k] < radix[k]) break;
            digits[k] = 0;
            if (k == 0) return;
        }
        if (radix.empty()) return;
    }
}

}  // namespace

void for_each_nc_vertex(const Party& p, const std::function<void(const ResponseFunction&)>& f) {
    std::vector<std::size_t> radix;
    for (std::size_t m = 0; m < p.measurements().size(); ++m) radix.push_back(p.outcome_count(m));
    for_each_digits(radix, [&](const std::vector<std::size_t>& d) { f(nc_vertex(p, d)); });
}

void for_each_g_vertex(const Party& p, const std::function<void(const ResponseFunction&)>& f) {
    std::vector<std::size_t> radix;
    for (std::size_t c = 0; c < p.contexts().size(); ++c) radix.push_back(p.tuple_count(c));
    for_each_digits(radix, [&](const std::vector<std::size_t>& d) { f(g_vertex(p, d)); });
}

std::vector<ResponseFunction> enumerate_nc_vertices(const Party& p) {
    std::vector<ResponseFunction> out;
    for_each_nc_vertex(p, [&](const ResponseFunction& f) { out.push_back(f); });
    return out;
}

std::vector<ResponseFunction> enumerate_g_vertices(const Party& p) {
    std::vector<ResponseFunction> out;
    for_each_g_vertex(p, [&](const ResponseFunction& f) { out.push_back(f); });
    return out;
}

std::vector<ResponseFunction> enumerate_nd_vertices(const Party& p, const DdOptions& options) {
    VRep v = facets_to_vertices(party_nd_hrep(p), options);
    std::vector<ResponseFunction> out;
    for (auto& x : v.vertices) out.push_back(ResponseFunction{ResponseClass::ND, std::move(x)});
    return out;
}

std::vector<ResponseFunction> enumerate_vertices(const Party& p, ResponseClass cls, const DdOptions& options) {
    switch (cls) {
        case ResponseClass::NC: return enumerate_nc_vertices(p);
        case ResponseClass::ND: return enumerate_nd_vertices(p, options);
        case ResponseClass::G: return enumerate_g_vertices(p);
    }
    return {};
}

std::vector<JointVertex> product_vertices(const Scenario& s, const std::vector<ResponseFunction>& vertices_a,
                                          const std::vector<ResponseFunction>& vertices_b, unsigned workers) {
    const auto& idx = s.index();
    if (s.party_count() == 1) {
        std::vector<JointVertex> out;
        for (std::size_t i = 0; i < vertices_a.size(); ++i) out.push_back(JointVertex{{i}, vertices_a[i].values});
        return out;
    }
    const Party& pa = s.party(0);
    const Party& pb = s.party(1);
    const std::size_t nb = vertices_b.size();
    std::vector<JointVertex> out(vertices_a.size() * nb);
    auto build = [&](std::size_t ia, std::size_t ib) {
        JointVertex v{{ia, ib}, RVector(idx.dimension(), 0)};
        const auto& fa = vertices_a[ia].values;
        const auto& fb = vertices_b[ib].values;
        for (std::size_t jc = 0; jc < idx.joint_context_count(); ++jc) {
            const auto& ctx = idx.joint_context(jc);
            const std::size_t ta_n = pa.tuple_count(ctx[0]);
            const std::size_t tb_n = pb.tuple_count(ctx[1]);
            for (std::size_t ta = 0; ta < ta_n; ++ta) {
                const Rational& x = fa[pa.local_offset(ctx[0]) + ta];
                if (sgn(x) == 0) continue;
                for (std::size_t tb = 0; tb < tb_n; ++tb) {
                    const Rational& y = fb[pb.local_offset(ctx[1]) + tb];
                    if (sgn(y) != 0) v.behaviour[idx.offset(jc) + ta * tb_n + tb] = x * y;
                }
            }
        }
        out[ia * nb + ib] = std::move(v);
    };
    const std::size_t total = out.size();
    workers = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(1, total / 64))));
    if (workers == 1) {
        for (std::size_t k = 0; k < total; ++k) build(k / nb, k % nb);
        return out;
    }
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t k = w; k < total; k += workers) build(k / nb, k % nb);
        });
    }
    for (auto& t : pool) t.join();
    return out;
}

std::vector<JointVertex> joint_vertices(ResponseClass cls_a, ResponseClass cls_b, const Scenario& s, unsigned workers,
                                        const DdOptions& options) {
    auto va = enumerate_vertices(s.party(0), cls_a, options);
    std::vector<ResponseFunction> vb;
    if (s.party_count() == 2) vb = enumerate_vertices(s.party(1), cls_b, options);
    return product_vertices(s, va, vb, workers);
}

std::vector<RVector> behaviour_vectors(const std::vector<JointVertex>& v) {
    std::vector<RVector> out;
    out.reserve(v.size());
    for (const auto& j : v) out.push_back(j.behaviour);
    return out;
}

}  // namespace extbell
