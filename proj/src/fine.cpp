// Copyright (c) extbell contributors.
// SPDX-License-Identifier: Apache-2.0
#include "extbell/fine.hpp"

namespace extbell {

namespace {

std::size_t key_arity(const Scenario& s, JointDistribution::Mode mode) {
    std::size_t n = 0;
    for (const auto& p : s.parties()) {
        n += mode == JointDistribution::Mode::PerMeasurement ? p.measurements().size() : p.contexts().size();
    }
    return n;
}

// Tuple index of context c of party `party` selected by key.
std::size_t tuple_of(const Scenario& s, JointDistribution::Mode mode, const std::vector<std::size_t>& key,
                     std::size_t party, std::size_t c) {
    std::size_t offset = 0;
    for (std::size_t q = 0; q < party; ++q) {
        const auto& pq = s.party(q);
        offset += mode == JointDistribution::Mode::PerMeasurement ? pq.measurements().size() : pq.contexts().size();
    }
    const Party& p = s.party(party);
    if (mode == JointDistribution::Mode::PerContext) return key[offset + c];
    std::vector<std::size_t> outcomes;
    for (auto m : p.contexts()[c]) outcomes.push_back(key[offset + m]);
    return p.encode_tuple(c, outcomes);
}

std::vector<std::size_t> slice(const std::vector<std::size_t>& key, std::size_t from, std::size_t n) {
    return {key.begin() + static_cast<std::ptrdiff_t>(from), key.begin() + static_cast<std::ptrdiff_t>(from + n)};
}

}  // namespace

void JointDistribution::validate(const Scenario& s) const {
    const std::size_t arity = key_arity(s, mode);
    Rational total = 0;
    if (support.empty()) throw Error(ErrorKind::Validation, "joint distribution has empty support");
    for (const auto& [key, w] : support) {
        if (key.size() != arity) {
            throw Error(ErrorKind::Validation, "joint distribution key has " + std::to_string(key.size()) +
                                                   " entries, expected " + std::to_string(arity));
        }
        std::size_t k = 0;
        for (const auto& p : s.parties()) {
            if (mode == Mode::PerMeasurement) {
                for (std::size_t m = 0; m < p.measurements().size(); ++m, ++k) {
                    if (key[k] >= p.outcome_count(m)) throw Error(ErrorKind::Validation, "joint distribution outcome out of range");
                }
            } else {
                for (std::size_t c = 0; c < p.contexts().size(); ++c, ++k) {
                    if (key[k] >= p.tuple_count(c)) throw Error(ErrorKind::Validation, "joint distribution tuple out of range");
                }
            }
        }
        if (sgn(w) < 0) throw Error(ErrorKind::Validation, "joint distribution has a negative weight");
        total += w;
    }
    if (total != 1) throw Error(ErrorKind::Validation, "joint distribution weights sum to " + to_string(total));
}

Behaviour behaviour_from_joint(const JointDistribution& w, const ScenarioPtr& s) {
    w.validate(*s);
    const auto& idx = s->index();
    RVector v(idx.dimension(), 0);
    for (std::size_t jc = 0; jc < idx.joint_context_count(); ++jc) {
        const auto& ctx = idx.joint_context(jc);
        for (const auto& [key, weight] : w.support) {
            CoordinateIndex::Key k{jc, {}};
            for (std::size_t q = 0; q < s->party_count(); ++q) k.tuples.push_back(tuple_of(*s, w.mode, key, q, ctx[q]));
            v[idx.position(k)] += weight;
        }
    }
    return Behaviour(s, std::move(v));
}

std::optional<LocalModel> local_model(const Behaviour& b, ResponseClass cls_a, ResponseClass cls_b,
                                      Certificate* separation, unsigned workers) {
    const Scenario& s = b.scenario();
    LocalModel m;
    m.vertices_a = enumerate_vertices(s.party(0), cls_a);
    if (s.party_count() == 2) m.vertices_b = enumerate_vertices(s.party(1), cls_b);
    m.joint = product_vertices(s, m.vertices_a, m.vertices_b, workers);
    Certificate c = membership(b, m.joint);
    if (!c.is_decomposition()) {
        if (separation) *separation = std::move(c);
        return std::nullopt;
    }
    m.decomposition = std::move(c);
    return m;
}

namespace {

JointDistribution joint_from_model(const Scenario& s, const LocalModel& m, JointDistribution::Mode mode) {
    JointDistribution w;
    w.mode = mode;
    for (const auto& [k, weight] : m.decomposition.weights) {
        const auto& jv = m.joint.at(k);
        std::vector<std::size_t> key;
        for (std::size_t q = 0; q < s.party_count(); ++q) {
            const auto& rf = q == 0 ? m.vertices_a.at(jv.parts[0]) : m.vertices_b.at(jv.parts[1]);
            auto part = mode == JointDistribution::Mode::PerMeasurement ? measurement_assignment(s.party(q), rf)
                                                                         : context_assignment(s.party(q), rf);
            if (!part) {
                throw Error(ErrorKind::Input, mode == JointDistribution::Mode::PerMeasurement
                                                  ? "decomposition uses a vertex that is not deterministic and non-contextual"
                                                  : "decomposition uses a vertex that is not deterministic per context");
            }
            key.insert(key.end(), part->begin(), part->end());
        }
        w.support[key] += weight;
    }
    return w;
}

LocalModel model_from_joint(const JointDistribution& w, const Scenario& s) {
    w.validate(s);
    LocalModel m;
    const bool per_measurement = w.mode == JointDistribution::Mode::PerMeasurement;
    const Party& pa = s.party(0);
    const std::size_t na = per_measurement ? pa.measurements().size() : pa.contexts().size();
    for (const auto& [key, weight] : w.support) {
        if (sgn(weight) == 0) continue;
        auto ka = slice(key, 0, na);
        m.vertices_a.push_back(per_measurement ? nc_vertex(pa, ka) : g_vertex(pa, ka));
        if (s.party_count() == 2) {
            auto kb = slice(key, na, key.size() - na);
            m.vertices_b.push_back(per_measurement ? nc_vertex(s.party(1), kb) : g_vertex(s.party(1), kb));
        }
        const std::size_t i = m.vertices_a.size() - 1;
        auto single = product_vertices(s, {m.vertices_a.back()},
                                       s.party_count() == 2 ? std::vector<ResponseFunction>{m.vertices_b.back()}
                                                            : std::vector<ResponseFunction>{});
        JointVertex jv = std::move(single.front());
        jv.parts.assign(s.party_count(), i);
        m.joint.push_back(std::move(jv));
        m.decomposition.weights.emplace_back(i, weight);
    }
    m.decomposition.kind = Certificate::Kind::Decomposition;
    return m;
}

}  // namespace

JointDistribution joint_from_nc_decomposition(const Scenario& s, const LocalModel& m) {
    return joint_from_model(s, m, JointDistribution::Mode::PerMeasurement);
}

LocalModel nc_decomposition_from_joint(const JointDistribution& w, const Scenario& s) {
    if (w.mode != JointDistribution::Mode::PerMeasurement) {
        throw Error(ErrorKind::Input, "expected a per-measurement joint distribution");
    }
    return model_from_joint(w, s);
}

JointDistribution joint_from_g_decomposition(const Scenario& s, const LocalModel& m) {
    return joint_from_model(s, m, JointDistribution::Mode::PerContext);
}

LocalModel g_decomposition_from_joint(const JointDistribution& w, const Scenario& s) {
    if (w.mode != JointDistribution::Mode::PerContext) throw Error(ErrorKind::Input, "expected a per-context joint distribution");
    return model_from_joint(w, s);
}

RVector model_behaviour(const LocalModel& m, std::size_t dimension) {
    RVector v(dimension, 0);
    for (const auto& [k, w] : m.decomposition.weights) {
        const auto& b = m.joint.at(k).behaviour;
        for (std::size_t i = 0; i < dimension; ++i) {
            if (sgn(b[i]) != 0) v[i] += w * b[i];
        }
    }
    return v;
}

}  // namespace extbell
