// Copyright (c) extbell contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "extbell/behaviour.hpp"
#include "extbell/polytope.hpp"
#include "extbell/scenario.hpp"

namespace extbell {

using CMatrix = Eigen::MatrixXcd;

/// Projectors indexed [party][measurement][outcome].
using ProjectorFamilies = std::vector<std::vector<std::vector<CMatrix>>>;

/// Floating-point behaviour in the scenario's coordinate layout.
using RealBehaviour = std::vector<double>;

/// Density matrix on the tensor product of the parties' spaces (first party
/// as the most significant factor) and projective measurements per party.
struct QuantumModel {
    std::vector<std::size_t> dims;
    CMatrix state;
    ProjectorFamilies projectors;

    /// Throws Error(Validation) naming the first broken condition: state
    /// Hermitian, PSD and of unit trace; families Hermitian, idempotent,
    /// orthogonal and complete; commuting inside every declared context.
    void validate(const Scenario& s, double tol = 1e-10) const;
};

CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Product of the projectors selected by `tuple` in context `c` of `party`.
CMatrix context_projector(const Party& party, const std::vector<std::vector<CMatrix>>& family, std::size_t c,
                          std::size_t tuple);

/// p(a,b|A,B) = Tr[rho (prod X) (x) (prod Y)]. Validates the model first.
RealBehaviour evaluate(const QuantumModel& m, const Scenario& s);

/// Party-local response Tr[rho_party prod X] on (context, tuple) coordinates.
RealBehaviour local_response(const CMatrix& rho, const Party& p, const std::vector<std::vector<CMatrix>>& family);

/// Largest violation of a no-signalling equality.
double ns_residual(const RealBehaviour& p, const Scenario& s);
/// Largest violation of a non-disturbance equality of `party`.
double nd_residual(const RealBehaviour& p, const Scenario& s, std::size_t party);
double value(const FacetInequality& f, const RealBehaviour& p);

/// Best rational approximation with denominator at most max_den.
Rational rationalize(double x, std::int64_t max_den = 1'000'000);
/// Entry-wise snap, kept only if every entry moved by less than tol and the
/// result is an exact behaviour.
std::optional<Behaviour> rationalize(const RealBehaviour& p, const ScenarioPtr& s, std::int64_t max_den = 1'000'000,
                                     double tol = 1e-9);

struct ProductState {
    double weight = 1;
    CMatrix rho_a;
    CMatrix rho_b;
};

/// Behaviour of sum_l w_l rho_a^l (x) rho_b^l with its decomposition into
/// products of party-local responses.
struct SeparableModel {
    RealBehaviour behaviour;
    std::vector<double> weights;
    std::vector<RealBehaviour> factors_a;
    std::vector<RealBehaviour> factors_b;
};
SeparableModel separable_behaviour(const std::vector<ProductState>& components, const ProjectorFamilies& projectors,
                                   const Scenario& s);

/// A random separable two-qubit model whose probabilities are exact rationals
/// of small denominator: Bloch vectors with entries in {0, +-3/5, +-4/5, +-1}
/// scaled by k/4, projectors along such directions, integer mixture weights.
/// Measurements sharing a context get commuting projectors (one common axis,
/// each either along it, against it or trivial).
struct SeparableSample {
    ProjectorFamilies projectors;
    std::vector<ProductState> components;
};
SeparableSample random_separable_qubit_model(const Scenario& s, std::mt19937_64& rng, std::size_t max_components = 3);

/// p(a|A) p_PR(b|B) for a second party whose contexts form a cycle of binary
/// pairs (B0,B1), (B1,B2), ..., (Bn-1,B0): outcomes agree in every context but
/// the last, where they differ. `alice` defaults to uniform.
Behaviour pr_product_behaviour(const ScenarioPtr& s, const std::optional<MarginalBehaviour>& alice = std::nullopt);

/// Correlator sum <B0B1> + <B1B2> + ... - <Bn-1B0> of a single-party cycle behaviour.
Rational cycle_correlator_sum(const MarginalBehaviour& m);

/// <A0B0> + <A0B1> + <A1B0> - <A1B1> on a two-party scenario with two binary
/// measurements per party, as coefficients on probabilities (bound 2).
FacetInequality chsh_functional(const Scenario& s);

struct SearchOptions {
    std::uint64_t seed = 1;
    unsigned restarts = 16;        // budget: number of random starts
    unsigned max_iterations = 300;
    std::vector<std::size_t> dims; // per party; defaults to 2 each
    unsigned workers = 1;
};

struct SearchResult {
    double value = 0;  // f . evaluate(model), never the optimizer's own estimate
    QuantumModel model;
    RealBehaviour behaviour;
    unsigned restarts_run = 0;
};

/// Seesaw lower bound on the quantum maximum of f for binary-outcome
/// scenarios: alternately optimizes each measurement inside the commutant of
/// its context partners and the state as the top eigenvector of the Bell
/// operator. Deterministic for a fixed seed, restart count and dims.
SearchResult violation_search(const FacetInequality& f, const Scenario& s, const SearchOptions& options = {});

}  // namespace extbell
