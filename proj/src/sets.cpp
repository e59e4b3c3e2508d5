// Copyright (c) extbell contributors.
// SPDX-License-Identifier: Apache-2.0
#include "extbell/sets.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace extbell {

namespace {

using Kind = AtomicSet::Kind;

const ResponseClass kClasses[] = {ResponseClass::NC, ResponseClass::ND, ResponseClass::G};

int rank_of(ResponseClass c) { return c == ResponseClass::NC ? 0 : c == ResponseClass::ND ? 1 : 2; }

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

AtomicSet parse_atom(const std::string& raw) {
    const std::string t = trim(raw);
    static const std::map<std::string, AtomicSet> names = {
        {"NS", {Kind::NS}},     {"ND_A", {Kind::ND_A}}, {"ND_B", {Kind::ND_B}}, {"ND", {Kind::ND}},
        {"NSND", {Kind::NSND}}, {"NC_A", {Kind::NC_A}}, {"NC_B", {Kind::NC_B}}, {"NC", {Kind::NC}},
        {"L_ND", {Kind::LocalNonDisturbing}},
        {"L_nc", AtomicSet::local(ResponseClass::NC, ResponseClass::NC)},
        {"L_nd", AtomicSet::local(ResponseClass::ND, ResponseClass::ND)},
        {"L_G", AtomicSet::local(ResponseClass::G, ResponseClass::G)},
    };
    if (auto it = names.find(t); it != names.end()) return it->second;
    if (t.size() > 5 && t.rfind("L_{", 0) == 0 && t.back() == '}') {
        const std::string inner = t.substr(3, t.size() - 4);
        const auto comma = inner.find(',');
        if (comma != std::string::npos) {
            try {
                return AtomicSet::local(parse_response_class(trim(inner.substr(0, comma))),
                                        parse_response_class(trim(inner.substr(comma + 1))));
            } catch (const Error&) {
            }
        }
    }
    throw Error(ErrorKind::Input, "unknown set label '" + t + "' (expected NS, ND_A, ND_B, ND, NSND, NC_A, NC_B, NC, "
                                  "L_nc, L_nd, L_G, L_ND or L_{I,J} with I,J in NC, ND, G)");
}

void append(ConstraintReport& into, const ConstraintReport& from) {
    into.families.insert(into.families.end(), from.families.begin(), from.families.end());
}

bool needs_second_party(const AtomicSet& a) {
    return a.kind == Kind::ND_B || a.kind == Kind::NC_B;
}

std::string describe_certificate(const Certificate& c) {
    if (c.is_decomposition()) return "decomposition over " + std::to_string(c.weights.size()) + " vertices";
    return "separation: value " + to_string(c.value) + " > bound " + to_string(c.bound);
}

}  // namespace

std::string to_string(const AtomicSet& a) {
    switch (a.kind) {
        case Kind::NS: return "NS";
        case Kind::ND_A: return "ND_A";
        case Kind::ND_B: return "ND_B";
        case Kind::ND: return "ND";
        case Kind::NSND: return "NSND";
        case Kind::NC_A: return "NC_A";
        case Kind::NC_B: return "NC_B";
        case Kind::NC: return "NC";
        case Kind::LocalNonDisturbing: return "L_ND";
        case Kind::Local: break;
    }
    if (a.a == a.b) {
        return a.a == ResponseClass::NC ? "L_nc" : a.a == ResponseClass::ND ? "L_nd" : "L_G";
    }
    return std::string("L_{") + to_string(a.a) + "," + to_string(a.b) + "}";
}

SetLabel SetLabel::parse(const std::string& text) {
    SetLabel out;
    std::size_t start = 0;
    while (true) {
        auto amp = text.find('&', start);
        out.parts.push_back(parse_atom(text.substr(start, amp == std::string::npos ? std::string::npos : amp - start)));
        if (amp == std::string::npos) break;
        start = amp + 1;
    }
    return out;
}

std::string SetLabel::str() const {
    std::string out;
    for (const auto& p : parts) out += (out.empty() ? "" : "&") + to_string(p);
    return out;
}

std::vector<SetLabel> parse_labels(const std::string& text) {
    std::vector<SetLabel> out;
    std::string piece;
    int depth = 0;
    auto flush = [&] {
        if (!trim(piece).empty()) out.push_back(SetLabel::parse(piece));
        piece.clear();
    };
    for (char c : text) {
        if (c == '{') ++depth;
        if (c == '}') --depth;
        if (c == ',' && depth == 0) {
            flush();
        } else {
            piece += c;
        }
    }
    flush();
    if (out.empty()) throw Error(ErrorKind::Input, "no set labels given");
    return out;
}

std::vector<AtomicSet> all_atomic_sets(std::size_t party_count) {
    std::vector<AtomicSet> out = {{Kind::NS}, {Kind::ND_A}};
    if (party_count == 2) out.push_back({Kind::ND_B});
    out.insert(out.end(), {{Kind::ND}, {Kind::NSND}, {Kind::NC_A}});
    if (party_count == 2) out.push_back({Kind::NC_B});
    out.push_back({Kind::NC});
    for (auto a : kClasses) {
        if (party_count == 2) {
            for (auto b : kClasses) out.push_back(AtomicSet::local(a, b));
        } else {
            out.push_back(AtomicSet::local(a, a));
        }
    }
    out.push_back({Kind::LocalNonDisturbing});
    return out;
}

const AtomicVerdict* MembershipReport::find(const AtomicSet& a) const {
    for (const auto& v : atoms) {
        if (v.set == a) return &v;
    }
    return nullptr;
}

bool MembershipReport::member(const SetLabel& label) const {
    for (const auto& p : label.parts) {
        const auto* v = find(p);
        if (!v) throw Error(ErrorKind::Input, "set " + to_string(p) + " was not classified");
        if (!v->member) return false;
    }
    return true;
}

std::string MembershipReport::render(const Scenario& s) const {
    std::size_t width = 5;
    for (const auto& l : labels) width = std::max(width, l.label.str().size());
    for (const auto& a : atoms) width = std::max(width, to_string(a.set).size());
    auto padded = [&](const std::string& x) { return x + std::string(width - x.size(), ' '); };
    std::string out = padded("label") + "  member\n";
    for (const auto& l : labels) out += padded(l.label.str()) + "  " + (l.member ? "yes" : "no") + "\n";
    out += "\n" + padded("set") + "  member  evidence\n";
    for (const auto& a : atoms) {
        std::string evidence;
        if (a.certificate) evidence = describe_certificate(*a.certificate);
        if (!a.violations.ok()) {
            if (!evidence.empty()) evidence += "; ";
            evidence += a.violations.families.front().describe(s);
            if (a.violations.families.size() > 1) {
                evidence += " (+" + std::to_string(a.violations.families.size() - 1) + " more)";
            }
        }
        if (!a.note.empty()) evidence += (evidence.empty() ? "" : "; ") + a.note;
        out += padded(to_string(a.set)) + "  " + (a.member ? "yes   " : "no    ") + (evidence.empty() ? "" : "  " + evidence);
        while (!out.empty() && out.back() == ' ') out.pop_back();
        out += "\n";
    }
    return out;
}

Classifier::Classifier(ScenarioPtr s, unsigned workers) : scenario_(std::move(s)), workers_(std::max(1u, workers)) {}

const std::vector<JointVertex>& Classifier::vertices(ResponseClass a, ResponseClass b) {
    if (scenario_->party_count() == 1) b = a;
    auto key = std::make_pair(a, b);
    auto it = joint_.find(key);
    if (it != joint_.end()) return it->second;
    const auto& va = party_vertices(0, a);
    std::vector<ResponseFunction> vb;
    if (scenario_->party_count() == 2) vb = party_vertices(1, b);
    return joint_.emplace(key, product_vertices(*scenario_, va, vb, workers_)).first->second;
}

const std::vector<ResponseFunction>& Classifier::party_vertices(std::size_t party, ResponseClass cls) {
    auto key = std::make_pair(party, cls);
    auto it = parties_.find(key);
    if (it != parties_.end()) return it->second;
    return parties_.emplace(key, enumerate_vertices(scenario_->party(party), cls)).first->second;
}

AtomicVerdict Classifier::decide(const Behaviour& b, const AtomicSet& set) {
    MembershipReport r = classify(b, {SetLabel{{set}}});
    return *r.find(set);
}

MembershipReport Classifier::classify(const Behaviour& b, const std::vector<SetLabel>& labels) {
    const Scenario& s = *scenario_;
    if (!(b.scenario() == s)) throw Error(ErrorKind::Input, "behaviour belongs to a different scenario");
    const bool two = s.party_count() == 2;
    MembershipReport report;
    // References returned by get() stay valid: there are fewer atoms than this.
    report.atoms.reserve(32);
    std::map<AtomicSet, std::size_t> done;

    std::function<const AtomicVerdict&(const AtomicSet&)> get = [&](const AtomicSet& a) -> const AtomicVerdict& {
        if (auto it = done.find(a); it != done.end()) return report.atoms[it->second];
        if (!two && needs_second_party(a)) {
            throw Error(ErrorKind::Input, "set " + to_string(a) + " needs a second party");
        }
        AtomicVerdict v;
        v.set = a;
        switch (a.kind) {
            case Kind::NS:
                if (two) v.violations = check_ns(b);
                else v.note = "single party";
                v.member = v.violations.ok();
                break;
            case Kind::ND_A:
            case Kind::ND_B:
                v.violations = check_nd(b, a.kind == Kind::ND_A ? 0 : 1);
                v.member = v.violations.ok();
                break;
            case Kind::ND: {
                const auto& na = get({Kind::ND_A});
                v.member = na.member;
                append(v.violations, na.violations);
                if (two) {
                    const auto& nb = get({Kind::ND_B});
                    v.member = v.member && nb.member;
                    append(v.violations, nb.violations);
                }
                break;
            }
            case Kind::NSND: {
                const bool ns = get({Kind::NS}).member;
                const bool nd = get({Kind::ND}).member;
                v.member = ns && nd;
                break;
            }
            case Kind::NC_A:
            case Kind::NC_B: {
                const std::size_t party = a.kind == Kind::NC_A ? 0 : 1;
                if (!get({Kind::NS}).member) {
                    v.member = false;
                    v.note = "marginal undefined for a signaling behaviour";
                    break;
                }
                MarginalBehaviour m = marginal(b, party);
                v.certificate = membership(m, party_vertices(party, ResponseClass::NC));
                v.member = v.certificate->is_decomposition();
                break;
            }
            case Kind::NC: {
                v.member = get({Kind::NC_A}).member;
                if (two) v.member = get({Kind::NC_B}).member && v.member;
                break;
            }
            case Kind::Local: {
                v.certificate = membership(b, vertices(a.a, a.b));
                v.member = v.certificate->is_decomposition();
                break;
            }
            case Kind::LocalNonDisturbing: {
                const auto& g = get(AtomicSet::local(ResponseClass::G, ResponseClass::G));
                const auto& nd = get({Kind::ND});
                v.certificate = g.certificate;
                v.violations = nd.violations;
                v.member = g.member && nd.member;
                break;
            }
        }
        report.atoms.push_back(std::move(v));
        done[a] = report.atoms.size() - 1;
        return report.atoms.back();
    };

    for (const auto& l : labels) {
        for (const auto& p : l.parts) get(p);
    }
    std::sort(report.atoms.begin(), report.atoms.end(),
              [](const AtomicVerdict& x, const AtomicVerdict& y) { return x.set < y.set; });
    for (const auto& l : labels) report.labels.push_back({l, report.member(l)});
    check_inclusions(report);
    return report;
}

MembershipReport classify(const Behaviour& b, const std::vector<SetLabel>& labels, unsigned workers) {
    Classifier c(b.scenario_ptr(), workers);
    return c.classify(b, labels);
}

void check_inclusions(const MembershipReport& r) {
    auto verdict = [&](const AtomicSet& a) -> std::optional<bool> {
        const auto* v = r.find(a);
        if (!v) return std::nullopt;
        return v->member;
    };
    auto implies = [&](const AtomicSet& x, const AtomicSet& y) {
        auto vx = verdict(x);
        auto vy = verdict(y);
        if (vx && vy && *vx && !*vy) {
            throw Error(ErrorKind::Verification,
                        "inconsistent verdicts: member of " + to_string(x) + " but not of " + to_string(y));
        }
    };
    auto both_imply = [&](const AtomicSet& x, const AtomicSet& y, const AtomicSet& z) {
        auto vx = verdict(x);
        auto vy = verdict(y);
        auto vz = verdict(z);
        if (vx && vy && vz && *vx && *vy && !*vz) {
            throw Error(ErrorKind::Verification, "inconsistent verdicts: member of " + to_string(x) + " and " +
                                                     to_string(y) + " but not of " + to_string(z));
        }
    };
    const AtomicSet ns{Kind::NS}, nd_a{Kind::ND_A}, nd_b{Kind::ND_B}, nd{Kind::ND}, nsnd{Kind::NSND};
    const AtomicSet nc_a{Kind::NC_A}, nc_b{Kind::NC_B}, nc{Kind::NC}, lnd{Kind::LocalNonDisturbing};
    const AtomicSet lg = AtomicSet::local(ResponseClass::G, ResponseClass::G);

    implies(nsnd, ns);
    implies(nsnd, nd);
    both_imply(ns, nd, nsnd);
    implies(nd, nd_a);
    implies(nd, nd_b);
    both_imply(nd_a, nd_b, nd);
    implies(nc, nc_a);
    implies(nc, nc_b);
    both_imply(nc_a, nc_b, nc);
    implies(nc_a, nd_a);
    implies(nc_b, nd_b);
    implies(nc_a, ns);
    implies(nc_b, ns);
    implies(lnd, lg);
    implies(lnd, nd);
    implies(lnd, nsnd);
    both_imply(lg, nd, lnd);
    for (auto a : kClasses) {
        for (auto b : kClasses) {
            const AtomicSet l = AtomicSet::local(a, b);
            implies(l, ns);
            if (rank_of(a) <= 1) implies(l, nd_a);
            if (rank_of(b) <= 1) implies(l, nd_b);
            if (a == ResponseClass::NC) implies(l, nc_a);
            if (b == ResponseClass::NC) implies(l, nc_b);
            if (rank_of(a) <= 1 && rank_of(b) <= 1) implies(l, lnd);
            for (auto a2 : kClasses) {
                for (auto b2 : kClasses) {
                    if (rank_of(a) <= rank_of(a2) && rank_of(b) <= rank_of(b2)) implies(l, AtomicSet::local(a2, b2));
                }
            }
        }
    }
}

Certificate marginal_nc(const Behaviour& b, std::size_t party) {
    const Scenario& s = b.scenario();
    if (party >= s.party_count()) throw Error(ErrorKind::Input, "no party " + std::to_string(party));
    MarginalBehaviour m = marginal(b, party);
    return membership(m, enumerate_nc_vertices(s.party(party)));
}

HRep nc_marginal_hrep(const Scenario& s, std::size_t party) {
    if (party >= s.party_count()) throw Error(ErrorKind::Input, "no party " + std::to_string(party));
    const Party& p = s.party(party);
    VRep local{p.local_dimension(), {}};
    for (const auto& v : enumerate_nc_vertices(p)) local.vertices.push_back(v.values);
    const HRep h = vertices_to_facets(local);
    const auto& idx = s.index();
    auto lift = [&](const LinearConstraint& c) {
        LinearConstraint out{RVector(idx.dimension(), 0), c.rhs};
        for (std::size_t i = 0; i < idx.dimension(); ++i) {
            const auto key = idx.key(i);
            const auto& ctx = idx.joint_context(key.joint_context);
            if (s.party_count() == 2 && ctx[1 - party] != 0) continue;
            out.coeffs[i] = c.coeffs[p.local_offset(ctx[party]) + key.tuples[party]];
        }
        return out;
    };
    HRep out;
    out.dimension = idx.dimension();
    for (const auto& e : h.equalities) out.equalities.push_back(lift(e));
    for (const auto& c : h.inequalities) out.inequalities.push_back(lift(c));
    return out;
}

namespace {

HRep non_disturbing_local_hrep(const ScenarioPtr& s, unsigned workers, const DdOptions& options) {
    VRep g{s->dimension(), behaviour_vectors(joint_vertices(ResponseClass::G, ResponseClass::G, *s, workers, options))};
    HRep h = vertices_to_facets(g, options);
    for (std::size_t q = 0; q < s->party_count(); ++q) {
        auto eq = nd_equalities(*s, q);
        h.equalities.insert(h.equalities.end(), eq.begin(), eq.end());
    }
    h.canonicalize();
    return h;
}

// Keeps the inequalities whose tight vertices span a facet. Facets of a
// polytope cut by an affine subspace are among the polytope's own facets, so
// this recovers the facets of L_ND from those of L_G without a second pass.
HRep facets_among(HRep h, const VRep& v) {
    HRep out{h.dimension, affine_hull(v), {}};
    for (auto& c : h.inequalities) c = reduce_modulo_equalities(c, out.equalities);
    h.canonicalize();
    const long dim = affine_dimension(v.vertices);
    std::set<std::vector<std::size_t>> seen;
    for (const auto& c : h.inequalities) {
        std::vector<std::size_t> zeros;
        std::vector<RVector> tight;
        for (std::size_t i = 0; i < v.vertices.size(); ++i) {
            if (dot(c.coeffs, v.vertices[i]) == c.rhs) {
                zeros.push_back(i);
                tight.push_back(v.vertices[i]);
            }
        }
        if (affine_dimension(tight) + 1 == dim && seen.insert(zeros).second) out.inequalities.push_back(c);
    }
    out.canonicalize();
    return out;
}

}  // namespace

VRep set_vertices(const ScenarioPtr& s, const AtomicSet& set, unsigned workers, const DdOptions& options) {
    if (set.kind == Kind::Local) {
        VRep v{s->dimension(), behaviour_vectors(joint_vertices(set.a, set.b, *s, workers, options))};
        v.canonicalize();
        return v;
    }
    if (set.kind == Kind::LocalNonDisturbing) return facets_to_vertices(non_disturbing_local_hrep(s, workers, options), options);
    throw Error(ErrorKind::Input, "set " + to_string(set) + " is not defined by a vertex list");
}

HRep set_facets(const ScenarioPtr& s, const AtomicSet& set, unsigned workers, const DdOptions& options) {
    if (set.kind == Kind::LocalNonDisturbing) {
        HRep h = non_disturbing_local_hrep(s, workers, options);
        return facets_among(h, facets_to_vertices(h, options));
    }
    return vertices_to_facets(set_vertices(s, set, workers, options), options);
}

HierarchyAudit hierarchy_audit(const ScenarioPtr& s, const std::vector<Behaviour>& samples, unsigned workers) {
    Classifier classifier(s, workers);
    const auto atoms = all_atomic_sets(s->party_count());
    std::vector<SetLabel> labels;
    for (const auto& a : atoms) labels.push_back(SetLabel{{a}});
    const AtomicSet nc{Kind::NC};
    auto local = [](ResponseClass a, ResponseClass b) { return AtomicSet::local(a, b); };
    using RC = ResponseClass;
    std::vector<std::pair<SetLabel, SetLabel>> chains = {
        {SetLabel{{local(RC::ND, RC::ND)}}, SetLabel{{AtomicSet{Kind::LocalNonDisturbing}}}},
        {SetLabel{{local(RC::NC, RC::NC)}}, SetLabel{{local(RC::ND, RC::ND), nc}}},
        {SetLabel{{local(RC::ND, RC::ND), nc}}, SetLabel{{local(RC::G, RC::G), nc}}},
    };
    if (s->party_count() == 2) {
        for (auto a : kClasses) {
            for (auto b : kClasses) {
                if (rank_of(a) < 2) chains.push_back({SetLabel{{local(a, b)}}, SetLabel{{local(kClasses[rank_of(a) + 1], b)}}});
                if (rank_of(b) < 2) chains.push_back({SetLabel{{local(a, b)}}, SetLabel{{local(a, kClasses[rank_of(b) + 1])}}});
            }
        }
    } else {
        chains.push_back({SetLabel{{local(RC::NC, RC::NC)}}, SetLabel{{local(RC::ND, RC::ND)}}});
        chains.push_back({SetLabel{{local(RC::ND, RC::ND)}}, SetLabel{{local(RC::G, RC::G)}}});
    }
    for (const auto& [inner, outer] : chains) {
        labels.push_back(inner);
        labels.push_back(outer);
    }
    HierarchyAudit audit;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        MembershipReport r = classifier.classify(samples[i], labels);
        for (const auto& [inner, outer] : chains) {
            if (!r.member(outer) || r.member(inner)) continue;
            for (const auto& p : inner.parts) {
                const auto* v = r.find(p);
                if (!v->member && v->certificate && !v->certificate->is_decomposition()) {
                    audit.witnesses.push_back({inner, outer, i, *v->certificate});
                    break;
                }
            }
        }
        audit.reports.push_back(std::move(r));
    }
    return audit;
}

bool LocalSetAudit::all_equal() const {
    for (const auto& row : contained) {
        for (bool c : row) {
            if (!c) return false;
        }
    }
    return true;
}

LocalSetAudit local_set_audit(const ScenarioPtr& s, unsigned workers) {
    Classifier classifier(s, workers);
    LocalSetAudit audit;
    for (auto a : kClasses) {
        if (s->party_count() == 2) {
            for (auto b : kClasses) audit.sets.push_back(AtomicSet::local(a, b));
        } else {
            audit.sets.push_back(AtomicSet::local(a, a));
        }
    }
    const std::size_t n = audit.sets.size();
    std::vector<std::vector<RVector>> points(n);
    std::vector<std::set<RVector>> lookup(n);
    for (std::size_t i = 0; i < n; ++i) {
        points[i] = behaviour_vectors(classifier.vertices(audit.sets[i].a, audit.sets[i].b));
        lookup[i] = std::set<RVector>(points[i].begin(), points[i].end());
    }
    audit.contained.assign(n, std::vector<bool>(n, true));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            for (const auto& v : points[i]) {
                if (lookup[j].count(v)) continue;
                if (!membership(v, points[j]).is_decomposition()) {
                    audit.contained[i][j] = false;
                    break;
                }
            }
        }
    }
    return audit;
}

}  // namespace extbell
