// Copyright (c) extbell contributors.
// SPDX-License-Identifier: Apache-2.0
#include "extbell/scenario.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "extbell/error.hpp"

namespace extbell {

namespace {

[[noreturn]] void invalid(const std::string& party, const std::string& what) {
    throw Error(ErrorKind::Validation, "party " + party + ": " + what);
}

}  // namespace

Party::Party(std::string id, std::vector<Measurement> measurements,
             std::vector<std::vector<std::string>> maximal_contexts)
    : id_(std::move(id)), measurements_(std::move(measurements)) {
    if (id_.empty()) throw Error(ErrorKind::Validation, "party id must be non-empty");
    if (measurements_.empty()) invalid(id_, "no measurements declared");
    std::map<std::string, std::size_t> by_label;
    for (std::size_t m = 0; m < measurements_.size(); ++m) {
        const auto& meas = measurements_[m];
        if (meas.label.empty()) invalid(id_, "empty measurement label");
        if (!by_label.emplace(meas.label, m).second) invalid(id_, "duplicate measurement label " + meas.label);
        if (meas.outcomes.empty()) invalid(id_, "measurement " + meas.label + " has an empty outcome list");
        std::set<std::string> seen(meas.outcomes.begin(), meas.outcomes.end());
        if (seen.size() != meas.outcomes.size()) invalid(id_, "measurement " + meas.label + " repeats an outcome label");
    }
    if (maximal_contexts.empty()) invalid(id_, "no contexts declared");
    for (const auto& ctx : maximal_contexts) {
        if (ctx.empty()) invalid(id_, "empty context");
        Context c;
        std::set<std::size_t> members;
        for (const auto& label : ctx) {
            auto it = by_label.find(label);
            if (it == by_label.end()) invalid(id_, "context mentions unknown measurement " + label);
            if (!members.insert(it->second).second) invalid(id_, "context repeats measurement " + label);
            c.push_back(it->second);
        }
        contexts_.push_back(std::move(c));
    }
    for (std::size_t i = 0; i < contexts_.size(); ++i) {
        for (std::size_t j = 0; j < contexts_.size(); ++j) {
            if (i == j) continue;
            std::set<std::size_t> a(contexts_[i].begin(), contexts_[i].end());
            std::set<std::size_t> b(contexts_[j].begin(), contexts_[j].end());
            if (std::includes(b.begin(), b.end(), a.begin(), a.end())) {
                invalid(id_, "context " + context_label(i) + " is not maximal (contained in " + context_label(j) + ")");
            }
        }
    }
    contexts_of_.assign(measurements_.size(), {});
    for (std::size_t c = 0; c < contexts_.size(); ++c) {
        for (auto m : contexts_[c]) contexts_of_[m].push_back(c);
    }
    for (std::size_t m = 0; m < measurements_.size(); ++m) {
        if (contexts_of_[m].empty()) invalid(id_, "measurement " + measurements_[m].label + " belongs to no context");
    }
    for (std::size_t c = 0; c < contexts_.size(); ++c) {
        std::size_t n = 1;
        for (auto m : contexts_[c]) n *= outcome_count(m);
        tuple_counts_.push_back(n);
        offsets_.push_back(local_dimension_);
        local_dimension_ += n;
    }
}

std::size_t Party::measurement_index(const std::string& label) const {
    for (std::size_t m = 0; m < measurements_.size(); ++m) {
        if (measurements_[m].label == label) return m;
    }
    throw Error(ErrorKind::Input, "party " + id_ + " has no measurement " + label);
}

std::vector<std::size_t> Party::decode_tuple(std::size_t c, std::size_t tuple) const {
    const auto& ctx = contexts_[c];
    std::vector<std::size_t> out(ctx.size());
    for (std::size_t k = ctx.size(); k-- > 0;) {
        std::size_t r = outcome_count(ctx[k]);
        out[k] = tuple % r;
        tuple /= r;
    }
    return out;
}

std::size_t Party::encode_tuple(std::size_t c, const std::vector<std::size_t>& outcomes) const {
    const auto& ctx = contexts_[c];
    std::size_t t = 0;
    for (std::size_t k = 0; k < ctx.size(); ++k) t = t * outcome_count(ctx[k]) + outcomes[k];
    return t;
}

std::string Party::context_label(std::size_t c) const {
    std::string s;
    for (auto m : contexts_[c]) s += measurements_[m].label;
    return s;
}

std::string Party::tuple_label(std::size_t c, std::size_t tuple) const {
    auto outcomes = decode_tuple(c, tuple);
    std::string s;
    for (std::size_t k = 0; k < outcomes.size(); ++k) s += measurements_[contexts_[c][k]].outcomes[outcomes[k]];
    return s;
}

std::size_t Party::position_in_context(std::size_t c, std::size_t m) const {
    const auto& ctx = contexts_[c];
    auto it = std::find(ctx.begin(), ctx.end(), m);
    return it == ctx.end() ? static_cast<std::size_t>(-1) : static_cast<std::size_t>(it - ctx.begin());
}

bool Party::has_singleton_contexts_only() const {
    return std::all_of(contexts_.begin(), contexts_.end(), [](const Context& c) { return c.size() == 1; });
}

bool Party::operator==(const Party& other) const {
    if (id_ != other.id_ || contexts_ != other.contexts_) return false;
    if (measurements_.size() != other.measurements_.size()) return false;
    for (std::size_t m = 0; m < measurements_.size(); ++m) {
        if (measurements_[m].label != other.measurements_[m].label ||
            measurements_[m].outcomes != other.measurements_[m].outcomes)
            return false;
    }
    return true;
}

std::vector<Subcontext> subcontexts(const Party& party) {
    const auto& ctxs = party.contexts();
    std::vector<Context> sorted;
    for (const auto& c : ctxs) {
        Context s = c;
        std::sort(s.begin(), s.end());
        sorted.push_back(std::move(s));
    }
    std::vector<Subcontext> out;
    for (std::size_t i = 0; i < ctxs.size(); ++i) {
        for (std::size_t j = i + 1; j < ctxs.size(); ++j) {
            Context inter;
            std::set_intersection(sorted[i].begin(), sorted[i].end(), sorted[j].begin(), sorted[j].end(),
                                  std::back_inserter(inter));
            if (inter.empty()) continue;
            bool known = std::any_of(out.begin(), out.end(), [&](const Subcontext& s) { return s.measurements == inter; });
            if (known) continue;
            Subcontext sub{inter, {}};
            for (std::size_t k = 0; k < ctxs.size(); ++k) {
                if (std::includes(sorted[k].begin(), sorted[k].end(), inter.begin(), inter.end())) sub.parents.push_back(k);
            }
            out.push_back(std::move(sub));
        }
    }
    return out;
}

CoordinateIndex::CoordinateIndex(const std::vector<Party>& parties) {
    std::size_t n = parties.size();
    std::size_t total = 1;
    for (const auto& p : parties) {
        party_context_counts_.push_back(p.contexts().size());
        total *= p.contexts().size();
    }
    for (std::size_t jc = 0; jc < total; ++jc) {
        std::vector<std::size_t> ctx(n);
        std::size_t rest = jc;
        for (std::size_t k = n; k-- > 0;) {
            ctx[k] = rest % party_context_counts_[k];
            rest /= party_context_counts_[k];
        }
        std::vector<std::size_t> counts(n);
        std::size_t block = 1;
        for (std::size_t k = 0; k < n; ++k) {
            counts[k] = parties[k].tuple_count(ctx[k]);
            block *= counts[k];
        }
        joint_contexts_.push_back(std::move(ctx));
        tuple_counts_.push_back(std::move(counts));
        offsets_.push_back(dimension_);
        block_sizes_.push_back(block);
        dimension_ += block;
    }
}

std::size_t CoordinateIndex::joint_context_of(const std::vector<std::size_t>& contexts) const {
    std::size_t jc = 0;
    for (std::size_t k = 0; k < contexts.size(); ++k) jc = jc * party_context_counts_[k] + contexts[k];
    return jc;
}

std::size_t CoordinateIndex::position(const Key& key) const {
    const auto& counts = tuple_counts_[key.joint_context];
    std::size_t local = 0;
    for (std::size_t k = 0; k < counts.size(); ++k) local = local * counts[k] + key.tuples[k];
    return offsets_[key.joint_context] + local;
}

CoordinateIndex::Key CoordinateIndex::key(std::size_t position) const {
    auto it = std::upper_bound(offsets_.begin(), offsets_.end(), position);
    std::size_t jc = static_cast<std::size_t>(it - offsets_.begin()) - 1;
    std::size_t local = position - offsets_[jc];
    const auto& counts = tuple_counts_[jc];
    Key k{jc, std::vector<std::size_t>(counts.size())};
    for (std::size_t p = counts.size(); p-- > 0;) {
        k.tuples[p] = local % counts[p];
        local /= counts[p];
    }
    return k;
}

Scenario::Scenario(std::string name, std::vector<Party> parties) : name_(std::move(name)), parties_(std::move(parties)) {
    if (parties_.empty()) throw Error(ErrorKind::Validation, "scenario needs at least one party");
    if (parties_.size() > 2) {
        throw Error(ErrorKind::Validation, "scenarios with more than two parties are not supported (got " +
                                               std::to_string(parties_.size()) + ")");
    }
    if (parties_.size() == 2 && parties_[0].id() == parties_[1].id()) {
        throw Error(ErrorKind::Validation, "duplicate party id " + parties_[0].id());
    }
    index_ = CoordinateIndex(parties_);
    // Row and column labels must identify coordinates unambiguously for the table format.
    std::set<std::string> rows;
    for (std::size_t jc = 0; jc < index_.joint_context_count(); ++jc) {
        if (!rows.insert(row_label(jc)).second) {
            throw Error(ErrorKind::Validation, "ambiguous context-pair label " + row_label(jc));
        }
        std::set<std::string> cols;
        for (std::size_t t = 0; t < index_.block_size(jc); ++t) {
            if (!cols.insert(column_label(jc, t)).second) {
                throw Error(ErrorKind::Validation, "ambiguous outcome label " + column_label(jc, t) + " in " + row_label(jc));
            }
        }
    }
}

std::size_t Scenario::party_index(const std::string& id) const {
    for (std::size_t i = 0; i < parties_.size(); ++i) {
        if (parties_[i].id() == id) return i;
    }
    throw Error(ErrorKind::Input, "scenario has no party " + id);
}

std::string Scenario::row_label(std::size_t jc) const {
    std::string s;
    const auto& ctx = index_.joint_context(jc);
    for (std::size_t k = 0; k < parties_.size(); ++k) s += parties_[k].context_label(ctx[k]);
    return s;
}

std::string Scenario::column_label(std::size_t jc, std::size_t local) const {
    auto key = index_.key(index_.offset(jc) + local);
    const auto& ctx = index_.joint_context(jc);
    std::string s;
    for (std::size_t k = 0; k < parties_.size(); ++k) s += parties_[k].tuple_label(ctx[k], key.tuples[k]);
    return s;
}

bool Scenario::operator==(const Scenario& other) const { return name_ == other.name_ && parties_ == other.parties_; }

CoordinateIndex build_index(const Scenario& s) { return CoordinateIndex(s.parties()); }

}  // namespace extbell
