// Copyright (c) extbell contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "extbell/error.hpp"
#include "extbell/polytope.hpp"
#include "extbell/rational.hpp"
#include "extbell/scenario.hpp"

namespace extbell {

/// Exact probability vector p(a,b|A,B) in the scenario's canonical layout.
/// Construction validates length, non-negativity and normalization of every
/// joint context.
class Behaviour {
  public:
    Behaviour(ScenarioPtr scenario, RVector values);

    const Scenario& scenario() const { return *scenario_; }
    const ScenarioPtr& scenario_ptr() const { return scenario_; }
    const RVector& values() const { return values_; }
    const Rational& operator[](std::size_t i) const { return values_[i]; }
    std::size_t size() const { return values_.size(); }

    bool operator==(const Behaviour& other) const {
        return *scenario_ == *other.scenario_ && values_ == other.values_;
    }

  private:
    ScenarioPtr scenario_;
    RVector values_;
};

/// A one-party marginal p(a|A). It lives on the single-party scenario of that
/// party, so every single-party check applies to it unchanged.
using MarginalBehaviour = Behaviour;

/// Single-party scenario made of party `party` of `s` (same labels).
ScenarioPtr party_scenario(const Scenario& s, std::size_t party);
ScenarioPtr party_scenario(const Party& p);

enum class MarginalPolicy {
    FirstPartner,  // sum out the other party in its first context
    Specific,      // sum out the other party in a given context
    RequireNS,     // compute with every partner context and require agreement
};

struct SignalingWitness {
    std::size_t party_context = 0;
    std::size_t partner_first = 0;
    std::size_t partner_second = 0;
    std::size_t tuple = 0;
    Rational difference;
};

class SignalingError : public Error {
  public:
    SignalingError(const std::string& what, SignalingWitness w) : Error(ErrorKind::Signaling, what), witness_(std::move(w)) {}
    const SignalingWitness& witness() const { return witness_; }

  private:
    SignalingWitness witness_;
};

MarginalBehaviour marginal(const Behaviour& b, std::size_t party, MarginalPolicy policy = MarginalPolicy::RequireNS,
                           std::size_t partner_context = 0);

/// One family of marginal equalities that fails: the marginal of `party` on
/// `measurements` computed in two ways disagrees.
struct ViolationFamily {
    enum class Kind { Signaling, Disturbance };
    Kind kind = Kind::Signaling;
    std::size_t party = 0;
    Context measurements;  // compared measurements, in the order of `first_context` of `party`
    // Signaling: the party context is fixed and `first`/`second` are contexts of
    // the other party. Disturbance: `first`/`second` are contexts of `party` and
    // `other_context` is the other party's context (if any).
    std::size_t party_context = 0;
    std::size_t first = 0;
    std::size_t second = 0;
    std::optional<std::size_t> other_context;
    RVector residuals;  // first minus second, one per outcome tuple of `measurements`
    Rational l1;

    std::string describe(const Scenario& s) const;
};

struct ConstraintReport {
    std::vector<ViolationFamily> families;
    bool ok() const { return families.empty(); }
    Rational total_l1() const;
};

ConstraintReport check_ns(const Behaviour& b);

/// Non-disturbance of `party` in the general form, conditioned on each context
/// of the other party. Valid for signaling behaviours too.
ConstraintReport check_nd(const Behaviour& b, std::size_t party);

/// Non-disturbance of the marginal of `party` (first partner context). Agrees
/// with check_nd only for non-signaling behaviours.
ConstraintReport check_nd_marginal(const Behaviour& b, std::size_t party);

struct NsndFlags {
    bool ns = false;
    bool nd_a = false;
    bool nd_b = false;
    bool nd = false;
    bool nsnd = false;
};

/// For single-party scenarios `ns` and `nd_b` are vacuously true.
NsndFlags classify_nsnd(const Behaviour& b);

// Linear descriptions on the behaviour coordinates of a scenario.

/// Normalization equalities and non-negativity inequalities.
HRep probability_constraints(const Scenario& s);
std::vector<LinearConstraint> ns_equalities(const Scenario& s);
std::vector<LinearConstraint> nd_equalities(const Scenario& s, std::size_t party);
/// Probability constraints plus ND equalities of the only party of `s`.
HRep party_nd_hrep(const Party& p);

/// Groups of coordinates of joint context (party context `c`, other party
/// context `other`) whose outcomes on `measurements` equal each sub-tuple,
/// sub-tuples in mixed radix with the last measurement fastest.
std::vector<std::vector<std::size_t>> marginal_groups(const Scenario& s, std::size_t party, std::size_t c,
                                                      std::optional<std::size_t> other, const Context& measurements);

/// Convex combination sum_i w_i b_i of behaviours on one scenario.
Behaviour mix(const std::vector<Behaviour>& parts, const RVector& weights);

}  // namespace extbell
