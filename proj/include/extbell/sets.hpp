// Copyright (c) extbell contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "extbell/behaviour.hpp"
#include "extbell/membership.hpp"
#include "extbell/vertices.hpp"

namespace extbell {

/// One set of the zoo. Constraint-defined kinds are decided by exact
/// equalities, hull-defined ones (Local, LocalNonDisturbing) by LP.
struct AtomicSet {
    enum class Kind { NS, ND_A, ND_B, ND, NSND, NC_A, NC_B, NC, Local, LocalNonDisturbing };
    Kind kind = Kind::NS;
    ResponseClass a = ResponseClass::G;  // Local only
    ResponseClass b = ResponseClass::G;

    static AtomicSet local(ResponseClass a, ResponseClass b) { return {Kind::Local, a, b}; }
    bool operator==(const AtomicSet&) const = default;
    auto operator<=>(const AtomicSet&) const = default;
};

/// Canonical name: "NS", "ND_A", ..., "L_nc", "L_nd", "L_G", "L_{NC,G}", "L_ND".
std::string to_string(const AtomicSet& a);

/// Intersection of atomic sets, written "L_nd&NC".
struct SetLabel {
    std::vector<AtomicSet> parts;

    /// Accepts the canonical names, "L_{I,J}" with I,J in {NC,ND,G} (any case)
    /// and "&"-joined intersections. Throws Error(Input).
    static SetLabel parse(const std::string& text);
    std::string str() const;
    bool operator==(const SetLabel&) const = default;
};

/// Parses a comma-separated label list.
std::vector<SetLabel> parse_labels(const std::string& text);

/// Every atomic set that applies to a scenario with the given party count.
std::vector<AtomicSet> all_atomic_sets(std::size_t party_count);

struct AtomicVerdict {
    AtomicSet set;
    bool member = false;
    // Hull-defined sets: the verified decomposition or separation.
    std::optional<Certificate> certificate;
    // Constraint-defined sets and the ND part of L_ND: failing equalities.
    ConstraintReport violations;
    std::string note;
};

struct LabelVerdict {
    SetLabel label;
    bool member = false;
};

struct MembershipReport {
    std::vector<AtomicVerdict> atoms;
    std::vector<LabelVerdict> labels;

    const AtomicVerdict* find(const AtomicSet& a) const;
    /// Verdict of a label whose atoms were all computed; throws otherwise.
    bool member(const SetLabel& label) const;
    /// Text table: one line per label, then one per atom with its evidence.
    std::string render(const Scenario& s) const;
};

/// Classifies behaviours of one scenario, caching joint vertex lists.
class Classifier {
  public:
    explicit Classifier(ScenarioPtr s, unsigned workers = 1);

    const Scenario& scenario() const { return *scenario_; }
    const std::vector<JointVertex>& vertices(ResponseClass a, ResponseClass b);
    const std::vector<ResponseFunction>& party_vertices(std::size_t party, ResponseClass cls);

    AtomicVerdict decide(const Behaviour& b, const AtomicSet& set);

    /// Decides every atom of `labels`, checks that the verdicts respect the
    /// known inclusions and throws Error(Verification) if they do not.
    MembershipReport classify(const Behaviour& b, const std::vector<SetLabel>& labels);

  private:
    ScenarioPtr scenario_;
    unsigned workers_;
    std::map<std::pair<ResponseClass, ResponseClass>, std::vector<JointVertex>> joint_;
    std::map<std::pair<std::size_t, ResponseClass>, std::vector<ResponseFunction>> parties_;
};

MembershipReport classify(const Behaviour& b, const std::vector<SetLabel>& labels, unsigned workers = 1);

/// Throws Error(Verification) naming the first inclusion that the verdicts break.
void check_inclusions(const MembershipReport& r);

/// Non-contextuality of one party's marginal. Throws SignalingError if the
/// marginal is not well defined.
Certificate marginal_nc(const Behaviour& b, std::size_t party);

/// The non-contextual polytope of one party's marginal, lifted to the joint
/// coordinates through the other party's first context. It describes NC_X
/// exactly on non-signalling behaviours.
HRep nc_marginal_hrep(const Scenario& s, std::size_t party);

/// Vertices and facets of a hull-defined set (Local or L_ND). L_ND goes
/// through the facets of L_G cut by the non-disturbance equalities.
VRep set_vertices(const ScenarioPtr& s, const AtomicSet& set, unsigned workers = 1, const DdOptions& options = {});
HRep set_facets(const ScenarioPtr& s, const AtomicSet& set, unsigned workers = 1, const DdOptions& options = {});

struct ProperInclusion {
    SetLabel inner;
    SetLabel outer;
    std::size_t sample = 0;
    Certificate separation;  // separates the sample from `inner`
};

struct HierarchyAudit {
    std::vector<MembershipReport> reports;  // one per sample, every atom decided
    std::vector<ProperInclusion> witnesses;
};

/// Classifies every sample against every atom (inclusions checked) and
/// collects samples lying in an outer set but outside an inner one for the
/// chains L_nd < L_ND, L_nc < L_nd&NC < L_G&NC and L_{I,J} < L_{I',J'}.
HierarchyAudit hierarchy_audit(const ScenarioPtr& s, const std::vector<Behaviour>& samples, unsigned workers = 1);

/// contained[i][j] is true when every vertex of local set i lies in local set
/// j; sets are ordered (NC,NC), (NC,ND), ..., (G,G).
struct LocalSetAudit {
    std::vector<AtomicSet> sets;
    std::vector<std::vector<bool>> contained;
    bool all_equal() const;
};
LocalSetAudit local_set_audit(const ScenarioPtr& s, unsigned workers = 1);

}  // namespace extbell
