// Copyright (c) extbell contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <vector>

#include "extbell/behaviour.hpp"
#include "extbell/membership.hpp"
#include "extbell/vertices.hpp"

namespace extbell {

/// A global joint distribution over the results of a scenario.
///
/// PerMeasurement keys hold one outcome index per measurement (first party's
/// measurements, then the second's). PerContext keys hold one outcome-tuple
/// index per maximal context (first party's contexts, then the second's), so
/// a measurement shared by two contexts is an independent variable in each.
struct JointDistribution {
    enum class Mode { PerMeasurement, PerContext };
    Mode mode = Mode::PerMeasurement;
    std::map<std::vector<std::size_t>, Rational> support;

    /// Throws Validation on arity, range, sign or normalization problems.
    void validate(const Scenario& s) const;
    bool operator==(const JointDistribution&) const = default;
};

/// The marginal behaviour of a joint distribution.
Behaviour behaviour_from_joint(const JointDistribution& w, const ScenarioPtr& s);

/// Decomposition over a joint vertex list whose parts are indexed into the
/// given per-party vertex lists.
struct LocalModel {
    std::vector<ResponseFunction> vertices_a;
    std::vector<ResponseFunction> vertices_b;  // unused for single-party scenarios
    std::vector<JointVertex> joint;
    Certificate decomposition;
};

/// Builds the local model of a behaviour over (cls_a, cls_b) response functions.
/// Returns std::nullopt (with the separation in `separation`) if none exists.
std::optional<LocalModel> local_model(const Behaviour& b, ResponseClass cls_a, ResponseClass cls_b,
                                      Certificate* separation = nullptr, unsigned workers = 1);

JointDistribution joint_from_nc_decomposition(const Scenario& s, const LocalModel& m);
LocalModel nc_decomposition_from_joint(const JointDistribution& w, const Scenario& s);
JointDistribution joint_from_g_decomposition(const Scenario& s, const LocalModel& m);
LocalModel g_decomposition_from_joint(const JointDistribution& w, const Scenario& s);

/// Behaviour reproduced by a local model's decomposition.
RVector model_behaviour(const LocalModel& m, std::size_t dimension);

}  // namespace extbell
