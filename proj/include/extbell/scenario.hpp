// Copyright (c) extbell contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

namespace extbell {

struct Measurement {
    std::string label;
    std::vector<std::string> outcomes;
};

/// Indices into Party::measurements(), in the order the context was declared.
using Context = std::vector<std::size_t>;

/// One laboratory: its measurements, their outcome labels and its maximal
/// contexts. Validated on construction; immutable afterwards.
class Party {
  public:
    Party(std::string id, std::vector<Measurement> measurements,
          std::vector<std::vector<std::string>> maximal_contexts);

    const std::string& id() const { return id_; }
    const std::vector<Measurement>& measurements() const { return measurements_; }
    const std::vector<Context>& contexts() const { return contexts_; }

    std::size_t measurement_index(const std::string& label) const;
    std::size_t outcome_count(std::size_t measurement) const { return measurements_[measurement].outcomes.size(); }

    /// Number of outcome tuples of context `c`.
    std::size_t tuple_count(std::size_t c) const { return tuple_counts_[c]; }
    /// Outcome index per measurement of context `c`, mixed radix, last fastest.
    std::vector<std::size_t> decode_tuple(std::size_t c, std::size_t tuple) const;
    std::size_t encode_tuple(std::size_t c, const std::vector<std::size_t>& outcomes) const;

    /// Party-local coordinates: (context, tuple) blocks in context order.
    std::size_t local_offset(std::size_t c) const { return offsets_[c]; }
    std::size_t local_dimension() const { return local_dimension_; }

    std::string context_label(std::size_t c) const;
    std::string tuple_label(std::size_t c, std::size_t tuple) const;

    /// Contexts containing measurement m, in declaration order.
    const std::vector<std::size_t>& contexts_of(std::size_t m) const { return contexts_of_[m]; }
    /// Position of measurement m inside context c, or npos.
    std::size_t position_in_context(std::size_t c, std::size_t m) const;

    bool has_singleton_contexts_only() const;

    bool operator==(const Party& other) const;

  private:
    std::string id_;
    std::vector<Measurement> measurements_;
    std::vector<Context> contexts_;
    std::vector<std::size_t> tuple_counts_;
    std::vector<std::size_t> offsets_;
    std::vector<std::vector<std::size_t>> contexts_of_;
    std::size_t local_dimension_ = 0;
};

struct Subcontext {
    Context measurements;              // sorted measurement indices
    std::vector<std::size_t> parents;  // maximal contexts containing it
};

/// Every non-empty proper intersection of two maximal contexts, once each,
/// with all maximal contexts that contain it.
std::vector<Subcontext> subcontexts(const Party& party);

/// Canonical layout of behaviour-vector coordinates. Joint contexts are
/// enumerated party-major (first party slowest); inside a joint context the
/// outcome tuples run mixed radix with the last measurement fastest.
class CoordinateIndex {
  public:
    struct Key {
        std::size_t joint_context;
        std::vector<std::size_t> tuples;  // one tuple index per party
        bool operator==(const Key&) const = default;
    };

    CoordinateIndex() = default;
    explicit CoordinateIndex(const std::vector<Party>& parties);

    std::size_t dimension() const { return dimension_; }
    std::size_t joint_context_count() const { return joint_contexts_.size(); }
    /// Context index per party of joint context `jc`.
    const std::vector<std::size_t>& joint_context(std::size_t jc) const { return joint_contexts_[jc]; }
    std::size_t joint_context_of(const std::vector<std::size_t>& contexts) const;
    std::size_t offset(std::size_t jc) const { return offsets_[jc]; }
    std::size_t block_size(std::size_t jc) const { return block_sizes_[jc]; }

    std::size_t position(const Key& key) const;
    Key key(std::size_t position) const;

  private:
    std::vector<std::vector<std::size_t>> joint_contexts_;
    std::vector<std::vector<std::size_t>> tuple_counts_;  // per jc, per party
    std::vector<std::size_t> offsets_;
    std::vector<std::size_t> block_sizes_;
    std::vector<std::size_t> party_context_counts_;
    std::size_t dimension_ = 0;
};

/// An extended Bell scenario with one (contextuality) or two (Bell) parties.
class Scenario {
  public:
    Scenario(std::string name, std::vector<Party> parties);

    const std::string& name() const { return name_; }
    const std::vector<Party>& parties() const { return parties_; }
    const Party& party(std::size_t i) const { return parties_[i]; }
    std::size_t party_count() const { return parties_.size(); }
    std::size_t party_index(const std::string& id) const;
    const CoordinateIndex& index() const { return index_; }
    std::size_t dimension() const { return index_.dimension(); }

    /// Row label of a joint context, e.g. "A0B0B1".
    std::string row_label(std::size_t jc) const;
    /// Column label of a tuple inside a joint context, e.g. "001".
    std::string column_label(std::size_t jc, std::size_t local) const;

    bool operator==(const Scenario& other) const;

  private:
    std::string name_;
    std::vector<Party> parties_;
    CoordinateIndex index_;
};

using ScenarioPtr = std::shared_ptr<const Scenario>;

CoordinateIndex build_index(const Scenario& s);

/// Short stable fingerprint of the canonical serialization (FNV-1a, hex).
std::string scenario_hash(const Scenario& s);

}  // namespace extbell
