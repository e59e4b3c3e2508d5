// Copyright (c) extbell contributors.
// SPDX-License-Identifier: Apache-2.0
#include "extbell/behaviour.hpp"

#include <sstream>

namespace extbell {

Behaviour::Behaviour(ScenarioPtr scenario, RVector values) : scenario_(std::move(scenario)), values_(std::move(values)) {
    if (!scenario_) throw Error(ErrorKind::Input, "behaviour without scenario");
    const auto& idx = scenario_->index();
    if (values_.size() != idx.dimension()) {
        throw Error(ErrorKind::Validation, "behaviour has " + std::to_string(values_.size()) + " entries, scenario " +
                                               scenario_->name() + " needs " + std::to_string(idx.dimension()));
    }
    for (std::size_t jc = 0; jc < idx.joint_context_count(); ++jc) {
        Rational sum = 0;
        for (std::size_t t = 0; t < idx.block_size(jc); ++t) {
            const Rational& v = values_[idx.offset(jc) + t];
            if (sgn(v) < 0) {
                throw Error(ErrorKind::Validation, "negative probability " + to_string(v) + " at " +
                                                       scenario_->row_label(jc) + " " + scenario_->column_label(jc, t));
            }
            sum += v;
        }
        if (sum != 1) {
            throw Error(ErrorKind::Validation, "row " + scenario_->row_label(jc) + " sums to " + to_string(sum) +
                                                   " (residual " + to_string(sum - 1) + ")");
        }
    }
}

ScenarioPtr party_scenario(const Party& p) { return std::make_shared<Scenario>(p.id(), std::vector<Party>{p}); }

ScenarioPtr party_scenario(const Scenario& s, std::size_t party) {
    if (s.party_count() == 1) return std::make_shared<Scenario>(s);
    return std::make_shared<Scenario>(s.name() + "/" + s.party(party).id(), std::vector<Party>{s.party(party)});
}

std::vector<std::vector<std::size_t>> marginal_groups(const Scenario& s, std::size_t party, std::size_t c,
                                                      std::optional<std::size_t> other, const Context& measurements) {
    const auto& idx = s.index();
    const Party& p = s.party(party);
    std::vector<std::size_t> ctx(s.party_count());
    ctx[party] = c;
    if (s.party_count() == 2) ctx[1 - party] = other.value_or(0);
    std::size_t jc = idx.joint_context_of(ctx);
    std::size_t groups = 1;
    std::vector<std::size_t> positions;
    for (auto m : measurements) {
        groups *= p.outcome_count(m);
        positions.push_back(p.position_in_context(c, m));
    }
    std::vector<std::vector<std::size_t>> out(groups);
    for (std::size_t local = 0; local < idx.block_size(jc); ++local) {
        std::size_t pos = idx.offset(jc) + local;
        auto outcomes = p.decode_tuple(c, idx.key(pos).tuples[party]);
        std::size_t sub = 0;
        for (std::size_t k = 0; k < measurements.size(); ++k) sub = sub * p.outcome_count(measurements[k]) + outcomes[positions[k]];
        out[sub].push_back(pos);
    }
    return out;
}

namespace {

Rational group_sum(const RVector& v, const std::vector<std::size_t>& g) {
    Rational s = 0;
    for (auto i : g) s += v[i];
    return s;
}

// Calls f(kind, party, measurements, party_context, first, second, other, groups1, groups2)
// for every marginal equality family of the given kind.
template <typename F>
void for_each_ns_family(const Scenario& s, F&& f) {
    if (s.party_count() < 2) return;
    for (std::size_t x = 0; x < 2; ++x) {
        const Party& p = s.party(x);
        const std::size_t others = s.party(1 - x).contexts().size();
        for (std::size_t c = 0; c < p.contexts().size(); ++c) {
            auto g1 = marginal_groups(s, x, c, 0, p.contexts()[c]);
            for (std::size_t d = 1; d < others; ++d) {
                auto g2 = marginal_groups(s, x, c, d, p.contexts()[c]);
                ViolationFamily fam;
                fam.kind = ViolationFamily::Kind::Signaling;
                fam.party = x;
                fam.measurements = p.contexts()[c];
                fam.party_context = c;
                fam.first = 0;
                fam.second = d;
                f(fam, g1, g2);
            }
        }
    }
}

template <typename F>
void for_each_nd_family(const Scenario& s, std::size_t party, F&& f) {
    const Party& p = s.party(party);
    std::vector<std::optional<std::size_t>> others;
    if (s.party_count() == 2) {
        for (std::size_t d = 0; d < s.party(1 - party).contexts().size(); ++d) others.emplace_back(d);
    } else {
        others.emplace_back(std::nullopt);
    }
    for (const auto& sub : subcontexts(p)) {
        const std::size_t p1 = sub.parents[0];
        for (std::size_t k = 1; k < sub.parents.size(); ++k) {
            const std::size_t p2 = sub.parents[k];
            for (auto d : others) {
                auto g1 = marginal_groups(s, party, p1, d, sub.measurements);
                auto g2 = marginal_groups(s, party, p2, d, sub.measurements);
                ViolationFamily fam;
                fam.kind = ViolationFamily::Kind::Disturbance;
                fam.party = party;
                fam.measurements = sub.measurements;
                fam.party_context = p1;
                fam.first = p1;
                fam.second = p2;
                fam.other_context = d;
                f(fam, g1, g2);
            }
        }
    }
}

using Groups = std::vector<std::vector<std::size_t>>;

void collect(ConstraintReport& report, const RVector& v, ViolationFamily fam, const Groups& g1, const Groups& g2) {
    bool bad = false;
    for (std::size_t k = 0; k < g1.size(); ++k) {
        Rational r = group_sum(v, g1[k]) - group_sum(v, g2[k]);
        if (sgn(r) != 0) bad = true;
        fam.l1 += abs(r);
        fam.residuals.push_back(std::move(r));
    }
    if (bad) report.families.push_back(std::move(fam));
}

void to_equalities(std::vector<LinearConstraint>& out, std::size_t dim, const Groups& g1, const Groups& g2) {
    for (std::size_t k = 0; k < g1.size(); ++k) {
        LinearConstraint c{RVector(dim, 0), 0};
        for (auto i : g1[k]) c.coeffs[i] += 1;
        for (auto i : g2[k]) c.coeffs[i] -= 1;
        if (!is_zero(c.coeffs)) out.push_back(std::move(c));
    }
}

std::string join_labels(const Party& p, const Context& ms) {
    std::string s;
    for (auto m : ms) s += p.measurements()[m].label;
    return s;
}

}  // namespace

MarginalBehaviour marginal(const Behaviour& b, std::size_t party, MarginalPolicy policy, std::size_t partner_context) {
    const Scenario& s = b.scenario();
    if (party >= s.party_count()) throw Error(ErrorKind::Input, "marginal: no party " + std::to_string(party));
    if (s.party_count() == 1) return b;
    const Party& p = s.party(party);
    const std::size_t others = s.party(1 - party).contexts().size();
    std::size_t partner = policy == MarginalPolicy::Specific ? partner_context : 0;
    if (partner >= others) throw Error(ErrorKind::Input, "marginal: no partner context " + std::to_string(partner));
    RVector values(p.local_dimension());
    for (std::size_t c = 0; c < p.contexts().size(); ++c) {
        auto g = marginal_groups(s, party, c, partner, p.contexts()[c]);
        for (std::size_t t = 0; t < g.size(); ++t) values[p.local_offset(c) + t] = group_sum(b.values(), g[t]);
        if (policy != MarginalPolicy::RequireNS) continue;
        for (std::size_t d = 1; d < others; ++d) {
            auto g2 = marginal_groups(s, party, c, d, p.contexts()[c]);
            for (std::size_t t = 0; t < g2.size(); ++t) {
                Rational diff = values[p.local_offset(c) + t] - group_sum(b.values(), g2[t]);
                if (sgn(diff) == 0) continue;
                const Party& q = s.party(1 - party);
                throw SignalingError("marginal of " + p.id() + " context " + p.context_label(c) + " outcome " +
                                         p.tuple_label(c, t) + " differs by " + to_string(diff) + " between " +
                                         q.context_label(0) + " and " + q.context_label(d),
                                     SignalingWitness{c, 0, d, t, diff});
            }
        }
    }
    return Behaviour(party_scenario(s, party), std::move(values));
}

std::string ViolationFamily::describe(const Scenario& s) const {
    const Party& p = s.party(party);
    std::ostringstream out;
    if (kind == Kind::Signaling) {
        const Party& q = s.party(1 - party);
        out << "signaling: " << p.id() << " marginal of " << p.context_label(party_context) << " differs between "
            << q.context_label(first) << " and " << q.context_label(second);
    } else {
        out << "disturbance: " << p.id() << " marginal of " << join_labels(p, measurements) << " differs between "
            << p.context_label(first) << " and " << p.context_label(second);
        if (other_context) out << " given " << s.party(1 - party).context_label(*other_context);
    }
    out << "; residuals";
    for (const auto& r : residuals) out << ' ' << to_string(r);
    out << "; L1 " << to_string(l1);
    return out.str();
}

Rational ConstraintReport::total_l1() const {
    Rational s = 0;
    for (const auto& f : families) s += f.l1;
    return s;
}

ConstraintReport check_ns(const Behaviour& b) {
    ConstraintReport r;
    for_each_ns_family(b.scenario(), [&](ViolationFamily fam, const Groups& g1, const Groups& g2) {
        collect(r, b.values(), std::move(fam), g1, g2);
    });
    return r;
}

ConstraintReport check_nd(const Behaviour& b, std::size_t party) {
    if (party >= b.scenario().party_count()) throw Error(ErrorKind::Input, "check_nd: no party " + std::to_string(party));
    ConstraintReport r;
    for_each_nd_family(b.scenario(), party, [&](ViolationFamily fam, const Groups& g1, const Groups& g2) {
        collect(r, b.values(), std::move(fam), g1, g2);
    });
    return r;
}

ConstraintReport check_nd_marginal(const Behaviour& b, std::size_t party) {
    auto m = marginal(b, party, MarginalPolicy::FirstPartner);
    auto r = check_nd(m, 0);
    for (auto& f : r.families) f.party = party;
    return r;
}

NsndFlags classify_nsnd(const Behaviour& b) {
    NsndFlags f;
    f.ns = check_ns(b).ok();
    f.nd_a = check_nd(b, 0).ok();
    f.nd_b = b.scenario().party_count() == 1 || check_nd(b, 1).ok();
    f.nd = f.nd_a && f.nd_b;
    f.nsnd = f.ns && f.nd;
    return f;
}

HRep probability_constraints(const Scenario& s) {
    const auto& idx = s.index();
    HRep h;
    h.dimension = idx.dimension();
    for (std::size_t jc = 0; jc < idx.joint_context_count(); ++jc) {
        LinearConstraint norm{RVector(h.dimension, 0), 1};
        for (std::size_t t = 0; t < idx.block_size(jc); ++t) norm.coeffs[idx.offset(jc) + t] = 1;
        h.equalities.push_back(std::move(norm));
    }
    for (std::size_t i = 0; i < h.dimension; ++i) {
        LinearConstraint c{RVector(h.dimension, 0), 0};
        c.coeffs[i] = -1;
        h.inequalities.push_back(std::move(c));
    }
    return h;
}

std::vector<LinearConstraint> ns_equalities(const Scenario& s) {
    std::vector<LinearConstraint> out;
    for_each_ns_family(s, [&](const ViolationFamily&, const Groups& g1, const Groups& g2) {
        to_equalities(out, s.dimension(), g1, g2);
    });
    return out;
}

std::vector<LinearConstraint> nd_equalities(const Scenario& s, std::size_t party) {
    std::vector<LinearConstraint> out;
    for_each_nd_family(s, party, [&](const ViolationFamily&, const Groups& g1, const Groups& g2) {
        to_equalities(out, s.dimension(), g1, g2);
    });
    return out;
}

HRep party_nd_hrep(const Party& p) {
    auto s = party_scenario(p);
    HRep h = probability_constraints(*s);
    auto nd = nd_equalities(*s, 0);
    h.equalities.insert(h.equalities.end(), nd.begin(), nd.end());
    h.canonicalize();
    return h;
}

Behaviour mix(const std::vector<Behaviour>& parts, const RVector& weights) {
    if (parts.empty() || parts.size() != weights.size()) throw Error(ErrorKind::Input, "mix: size mismatch");
    RVector v(parts[0].size(), 0);
    for (std::size_t k = 0; k < parts.size(); ++k) {
        if (!(parts[k].scenario() == parts[0].scenario())) throw Error(ErrorKind::Input, "mix: scenario mismatch");
        if (sgn(weights[k]) == 0) continue;
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += weights[k] * parts[k][i];
    }
    return Behaviour(parts[0].scenario_ptr(), std::move(v));
}

}  // namespace extbell
