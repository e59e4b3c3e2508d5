// Copyright (c) extbell contributors.
// SPDX-License-Identifier: Apache-2.0
#include "extbell/quantum.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <cmath>
#include <complex>
#include <cstdio>
#include <random>
#include <thread>

namespace extbell {

namespace {

using Complex = std::complex<double>;

double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

void check_state(const CMatrix& rho, std::size_t dim, double tol, const std::string& what) {
    if (static_cast<std::size_t>(rho.rows()) != dim || static_cast<std::size_t>(rho.cols()) != dim) {
        throw Error(ErrorKind::Validation, what + " must be " + std::to_string(dim) + "x" + std::to_string(dim));
    }
    if (double r = max_abs(rho - rho.adjoint()); r > tol) throw Error(ErrorKind::Validation, what + " is not Hermitian (residual " + fmt(r) + ")");
    if (double r = std::abs(rho.trace() - Complex(1, 0)); r > tol) {
        throw Error(ErrorKind::Validation, what + " does not have unit trace (residual " + fmt(r) + ")");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(rho);
    if (double lo = es.eigenvalues().minCoeff(); lo < -tol) {
        throw Error(ErrorKind::Validation, what + " is not positive semidefinite (eigenvalue " + fmt(lo) + ")");
    }
}

void check_families(const Scenario& s, const std::vector<std::size_t>& dims, const ProjectorFamilies& pf, double tol) {
    if (pf.size() != s.party_count() || dims.size() != s.party_count()) {
        throw Error(ErrorKind::Validation, "model needs dimensions and projectors for " + std::to_string(s.party_count()) + " parties");
    }
    for (std::size_t q = 0; q < s.party_count(); ++q) {
        const Party& p = s.party(q);
        const std::size_t d = dims[q];
        if (pf[q].size() != p.measurements().size()) {
            throw Error(ErrorKind::Validation, "party " + p.id() + " needs projectors for " +
                                                   std::to_string(p.measurements().size()) + " measurements");
        }
        const CMatrix id = CMatrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
        for (std::size_t m = 0; m < pf[q].size(); ++m) {
            const auto& fam = pf[q][m];
            const std::string& label = p.measurements()[m].label;
            if (fam.size() != p.outcome_count(m)) {
                throw Error(ErrorKind::Validation, label + " needs " + std::to_string(p.outcome_count(m)) + " projectors");
            }
            CMatrix sum = CMatrix::Zero(id.rows(), id.cols());
            for (std::size_t o = 0; o < fam.size(); ++o) {
                const CMatrix& x = fam[o];
                if (x.rows() != id.rows() || x.cols() != id.cols()) {
                    throw Error(ErrorKind::Validation, label + " projector has the wrong size");
                }
                const std::string name = label + " outcome " + p.measurements()[m].outcomes[o];
                if (double r = max_abs(x - x.adjoint()); r > tol) throw Error(ErrorKind::Validation, name + " is not Hermitian (residual " + fmt(r) + ")");
                if (double r = max_abs(x * x - x); r > tol) throw Error(ErrorKind::Validation, name + " is not idempotent (residual " + fmt(r) + ")");
                for (std::size_t o2 = o + 1; o2 < fam.size(); ++o2) {
                    if (double r = max_abs(x * fam[o2]); r > tol) {
                        throw Error(ErrorKind::Validation, label + " projectors for outcomes " + p.measurements()[m].outcomes[o] +
                                                               " and " + p.measurements()[m].outcomes[o2] + " are not orthogonal");
                    }
                }
                sum += x;
            }
            if (double r = max_abs(sum - id); r > tol) throw Error(ErrorKind::Validation, label + " projectors do not sum to the identity");
        }
        for (std::size_t c = 0; c < p.contexts().size(); ++c) {
            const auto& ctx = p.contexts()[c];
            for (std::size_t i = 0; i < ctx.size(); ++i) {
                for (std::size_t j = i + 1; j < ctx.size(); ++j) {
                    for (const auto& x : pf[q][ctx[i]]) {
                        for (const auto& y : pf[q][ctx[j]]) {
                            if (double r = max_abs(x * y - y * x); r > tol) {
                                throw Error(ErrorKind::Validation, "projectors of " + p.measurements()[ctx[i]].label + " and " +
                                                                       p.measurements()[ctx[j]].label + " do not commute in context " +
                                                                       p.context_label(c) + " (residual " + fmt(r) + ")");
                            }
                        }
                    }
                }
            }
        }
    }
}

template <typename Groups>
double group_gap(const RealBehaviour& p, const Groups& g1, const Groups& g2) {
    double worst = 0;
    for (std::size_t k = 0; k < g1.size(); ++k) {
        double a = 0, b = 0;
        for (auto i : g1[k]) a += p[i];
        for (auto i : g2[k]) b += p[i];
        worst = std::max(worst, std::abs(a - b));
    }
    return worst;
}

void require_size(const RealBehaviour& p, const Scenario& s) {
    if (p.size() != s.dimension()) throw Error(ErrorKind::Input, "behaviour has the wrong length");
}

CMatrix random_hermitian(std::size_t d, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    CMatrix h(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < h.rows(); ++i) {
        for (Eigen::Index j = 0; j < h.cols(); ++j) h(i, j) = Complex(g(rng), g(rng));
    }
    return (h + h.adjoint()) / 2.0;
}

// Orthonormal (Hilbert-Schmidt) basis of the matrices commuting with every
// element of `partners`.
std::vector<CMatrix> commutant_basis(const std::vector<const CMatrix*>& partners, std::size_t d) {
    const auto n = static_cast<Eigen::Index>(d);
    std::vector<CMatrix> basis;
    if (partners.empty()) return basis;
    CMatrix sys(static_cast<Eigen::Index>(partners.size()) * n * n, n * n);
    const CMatrix id = CMatrix::Identity(n, n);
    for (std::size_t k = 0; k < partners.size(); ++k) {
        // vec(P Z - Z P) = (I (x) P - P^T (x) I) vec(Z), column-major vec.
        sys.middleRows(static_cast<Eigen::Index>(k) * n * n, n * n) = kron(id, *partners[k]) - kron(partners[k]->transpose(), id);
    }
    Eigen::JacobiSVD<CMatrix> svd(sys, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const CMatrix& v = svd.matrixV();
    for (Eigen::Index j = 0; j < n * n; ++j) {
        const double s = j < sv.size() ? sv(j) : 0.0;
        if (s > 1e-9) continue;
        CMatrix z(n, n);
        for (Eigen::Index c = 0; c < n; ++c) z.col(c) = v.col(j).segment(c * n, n);
        basis.push_back(std::move(z));
    }
    return basis;
}

CMatrix project_commutant(const CMatrix& m, const std::vector<CMatrix>& basis, bool constrained) {
    if (!constrained) return m;
    CMatrix out = CMatrix::Zero(m.rows(), m.cols());
    for (const auto& b : basis) out += (b.adjoint() * m).trace() * b;
    return (out + out.adjoint()) / 2.0;
}

CMatrix positive_projector(const CMatrix& m, double threshold) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
    CMatrix p = CMatrix::Zero(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        if (es.eigenvalues()(i) > threshold) p += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
    }
    return p;
}

struct Term {
    std::size_t jc;
    std::vector<std::size_t> tuples;
    double coef;
};

// Seesaw state for one restart.
class Seesaw {
  public:
    Seesaw(const Scenario& s, const std::vector<Term>& terms, std::vector<std::size_t> dims)
        : s_(s), terms_(terms), dims_(std::move(dims)) {
        for (std::size_t q = 0; q < s_.party_count(); ++q) {
            const Party& p = s_.party(q);
            partners_.emplace_back(p.measurements().size());
            for (std::size_t m = 0; m < p.measurements().size(); ++m) {
                for (auto c : p.contexts_of(m)) {
                    for (auto other : p.contexts()[c]) {
                        auto& list = partners_[q][m];
                        if (other != m && std::find(list.begin(), list.end(), other) == list.end()) list.push_back(other);
                    }
                }
            }
        }
    }

    void randomize(std::mt19937_64& rng) {
        proj_.assign(s_.party_count(), {});
        for (std::size_t q = 0; q < s_.party_count(); ++q) {
            const std::size_t d = dims_[q];
            const std::size_t count = s_.party(q).measurements().size();
            proj_[q].assign(count, CMatrix());
            std::vector<bool> made(count, false);
            for (std::size_t m = 0; m < count; ++m) {
                std::vector<const CMatrix*> fixed;
                for (auto o : partners_[q][m]) {
                    if (made[o]) fixed.push_back(&proj_[q][o]);
                }
                auto basis = commutant_basis(fixed, d);
                proj_[q][m] = settle(positive_projector(project_commutant(random_hermitian(d, rng), basis, !fixed.empty()), 0.0),
                                     basis, !fixed.empty());
                made[m] = true;
            }
        }
        update_state();
    }

    double run(unsigned max_iterations) {
        double current = value();
        for (unsigned it = 0; it < max_iterations; ++it) {
            for (std::size_t q = 0; q < s_.party_count(); ++q) {
                for (std::size_t m = 0; m < proj_[q].size(); ++m) update_measurement(q, m);
            }
            update_state();
            const double next = value();
            if (next < current + 1e-12) {
                current = std::max(current, next);
                break;
            }
            current = next;
        }
        return current;
    }

    QuantumModel model() const {
        QuantumModel m;
        m.dims = dims_;
        m.state = psi_ * psi_.adjoint();
        for (std::size_t q = 0; q < proj_.size(); ++q) {
            const auto n = static_cast<Eigen::Index>(dims_[q]);
            m.projectors.emplace_back();
            for (const auto& p : proj_[q]) m.projectors.back().push_back({p, CMatrix::Identity(n, n) - p});
        }
        return m;
    }

  private:
    CMatrix outcome(std::size_t q, std::size_t m, std::size_t o) const {
        if (o == 0) return proj_[q][m];
        const auto n = static_cast<Eigen::Index>(dims_[q]);
        return CMatrix::Identity(n, n) - proj_[q][m];
    }

    // Product over the context, skipping measurement `skip`.
    CMatrix context_product(std::size_t q, std::size_t c, std::size_t tuple, std::size_t skip = SIZE_MAX) const {
        const Party& p = s_.party(q);
        const auto n = static_cast<Eigen::Index>(dims_[q]);
        auto outs = p.decode_tuple(c, tuple);
        CMatrix r = CMatrix::Identity(n, n);
        for (std::size_t k = 0; k < p.contexts()[c].size(); ++k) {
            const auto m = p.contexts()[c][k];
            if (m != skip) r = r * outcome(q, m, outs[k]);
        }
        return r;
    }

    CMatrix psi_matrix() const {
        const auto da = static_cast<Eigen::Index>(dims_[0]);
        const auto db = s_.party_count() == 2 ? static_cast<Eigen::Index>(dims_[1]) : 1;
        CMatrix m(da, db);
        for (Eigen::Index i = 0; i < da; ++i) {
            for (Eigen::Index j = 0; j < db; ++j) m(i, j) = psi_(i * db + j);
        }
        return m;
    }

    CMatrix bell_operator() const {
        const Eigen::Index dim = static_cast<Eigen::Index>(dims_[0] * (s_.party_count() == 2 ? dims_[1] : 1));
        CMatrix w = CMatrix::Zero(dim, dim);
        for (const auto& t : terms_) {
            const auto& ctx = s_.index().joint_context(t.jc);
            CMatrix a = context_product(0, ctx[0], t.tuples[0]);
            if (s_.party_count() == 2) a = kron(a, context_product(1, ctx[1], t.tuples[1]));
            w += t.coef * a;
        }
        return (w + w.adjoint()) / 2.0;
    }

    void update_state() {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(bell_operator());
        psi_ = es.eigenvectors().col(es.eigenvectors().cols() - 1);
    }

    double value() const {
        return (psi_.adjoint() * bell_operator() * psi_)(0, 0).real();
    }

    void update_measurement(std::size_t q, std::size_t m) {
        const Party& p = s_.party(q);
        const auto n = static_cast<Eigen::Index>(dims_[q]);
        const CMatrix psi = psi_matrix();
        CMatrix k = CMatrix::Zero(n, n);
        for (const auto& t : terms_) {
            const auto& ctx = s_.index().joint_context(t.jc);
            const std::size_t c = ctx[q];
            const std::size_t pos = p.position_in_context(c, m);
            if (pos == SIZE_MAX || pos >= p.contexts()[c].size()) continue;
            const std::size_t o = p.decode_tuple(c, t.tuples[q])[pos];
            CMatrix tau;
            if (s_.party_count() == 1) {
                tau = psi * psi.adjoint();
            } else {
                const CMatrix other = context_product(1 - q, ctx[1 - q], t.tuples[1 - q]);
                tau = q == 0 ? CMatrix(psi * other.transpose() * psi.adjoint()) : CMatrix(psi.transpose() * other.transpose() * psi.conjugate());
            }
            const CMatrix contrib = t.coef * context_product(q, c, t.tuples[q], m) * tau;
            if (o == 0) k += contrib;
            else k -= contrib;
        }
        std::vector<const CMatrix*> fixed;
        for (auto o : partners_[q][m]) fixed.push_back(&proj_[q][o]);
        auto basis = commutant_basis(fixed, dims_[q]);
        const CMatrix target = project_commutant((k + k.adjoint()) / 2.0, basis, !fixed.empty());
        const double scale = std::max(1.0, max_abs(target));
        CMatrix next = settle(positive_projector(target, 1e-12 * scale), basis, !fixed.empty());
        // Keep the old projector unless the new one is at least as good.
        const double gain = (next * target).trace().real() - (proj_[q][m] * target).trace().real();
        if (gain >= -1e-12) proj_[q][m] = std::move(next);
    }

    static CMatrix settle(const CMatrix& p, const std::vector<CMatrix>& basis, bool constrained) {
        if (!constrained) return p;
        return positive_projector(project_commutant(p, basis, true), 0.5);
    }

    const Scenario& s_;
    const std::vector<Term>& terms_;
    std::vector<std::size_t> dims_;
    std::vector<std::vector<std::vector<std::size_t>>> partners_;
    std::vector<std::vector<CMatrix>> proj_;
    Eigen::VectorXcd psi_;
};

}  // namespace

void QuantumModel::validate(const Scenario& s, double tol) const {
    check_families(s, dims, projectors, tol);
    std::size_t total = 1;
    for (auto d : dims) {
        if (d == 0) throw Error(ErrorKind::Validation, "local dimensions must be positive");
        total *= d;
    }
    check_state(state, total, tol, "state");
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
    return out;
}

CMatrix context_projector(const Party& party, const std::vector<std::vector<CMatrix>>& family, std::size_t c,
                          std::size_t tuple) {
    auto outs = party.decode_tuple(c, tuple);
    const auto& ctx = party.contexts()[c];
    CMatrix r = family[ctx[0]][outs[0]];
    for (std::size_t k = 1; k < ctx.size(); ++k) r = r * family[ctx[k]][outs[k]];
    return r;
}

RealBehaviour evaluate(const QuantumModel& m, const Scenario& s) {
    m.validate(s);
    const auto& idx = s.index();
    RealBehaviour p(idx.dimension(), 0.0);
    for (std::size_t i = 0; i < idx.dimension(); ++i) {
        const auto key = idx.key(i);
        const auto& ctx = idx.joint_context(key.joint_context);
        CMatrix op = context_projector(s.party(0), m.projectors[0], ctx[0], key.tuples[0]);
        if (s.party_count() == 2) op = kron(op, context_projector(s.party(1), m.projectors[1], ctx[1], key.tuples[1]));
        p[i] = (m.state * op).trace().real();
    }
    return p;
}

RealBehaviour local_response(const CMatrix& rho, const Party& p, const std::vector<std::vector<CMatrix>>& family) {
    RealBehaviour out(p.local_dimension(), 0.0);
    for (std::size_t c = 0; c < p.contexts().size(); ++c) {
        for (std::size_t t = 0; t < p.tuple_count(c); ++t) {
            out[p.local_offset(c) + t] = (rho * context_projector(p, family, c, t)).trace().real();
        }
    }
    return out;
}

double ns_residual(const RealBehaviour& p, const Scenario& s) {
    require_size(p, s);
    if (s.party_count() < 2) return 0;
    double worst = 0;
    for (std::size_t x = 0; x < 2; ++x) {
        const Party& party = s.party(x);
        for (std::size_t c = 0; c < party.contexts().size(); ++c) {
            auto g1 = marginal_groups(s, x, c, 0, party.contexts()[c]);
            for (std::size_t d = 1; d < s.party(1 - x).contexts().size(); ++d) {
                worst = std::max(worst, group_gap(p, g1, marginal_groups(s, x, c, d, party.contexts()[c])));
            }
        }
    }
    return worst;
}

double nd_residual(const RealBehaviour& p, const Scenario& s, std::size_t party) {
    require_size(p, s);
    std::vector<std::optional<std::size_t>> others;
    if (s.party_count() == 2) {
        for (std::size_t d = 0; d < s.party(1 - party).contexts().size(); ++d) others.emplace_back(d);
    } else {
        others.emplace_back(std::nullopt);
    }
    double worst = 0;
    for (const auto& sub : subcontexts(s.party(party))) {
        for (std::size_t k = 1; k < sub.parents.size(); ++k) {
            for (auto d : others) {
                worst = std::max(worst, group_gap(p, marginal_groups(s, party, sub.parents[0], d, sub.measurements),
                                                  marginal_groups(s, party, sub.parents[k], d, sub.measurements)));
            }
        }
    }
    return worst;
}

double value(const FacetInequality& f, const RealBehaviour& p) {
    if (f.coeffs.size() != p.size()) throw Error(ErrorKind::Input, "inequality and behaviour have different lengths");
    double v = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (sgn(f.coeffs[i]) != 0) v += f.coeffs[i].get_d() * p[i];
    }
    return v;
}

Rational rationalize(double x, std::int64_t max_den) {
    if (!std::isfinite(x) || std::abs(x) > 1e12) throw Error(ErrorKind::Input, "cannot rationalize " + std::to_string(x));
    if (max_den < 1) throw Error(ErrorKind::Input, "denominator cap must be positive");
    const bool negative = x < 0;
    long double y = std::abs(static_cast<long double>(x));
    std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    for (int step = 0; step < 64; ++step) {
        const long double a_ld = std::floor(y);
        if (k1 > 0 && a_ld > static_cast<long double>(max_den)) break;
        const auto a = static_cast<std::int64_t>(a_ld);
        const std::int64_t k = a * k1 + k0;
        if (k > max_den) break;
        const std::int64_t h = a * h1 + h0;
        h0 = h1;
        h1 = h;
        k0 = k1;
        k1 = k;
        const long double frac = y - a_ld;
        if (frac < 1e-13L) break;
        y = 1 / frac;
    }
    Rational q(Integer(static_cast<long>(h1)), Integer(static_cast<long>(k1)));
    q.canonicalize();
    return negative ? Rational(-q) : q;
}

std::optional<Behaviour> rationalize(const RealBehaviour& p, const ScenarioPtr& s, std::int64_t max_den, double tol) {
    require_size(p, *s);
    RVector v(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        v[i] = rationalize(p[i], max_den);
        if (std::abs(v[i].get_d() - p[i]) >= tol) return std::nullopt;
    }
    try {
        return Behaviour(s, std::move(v));
    } catch (const Error&) {
        return std::nullopt;
    }
}

SeparableModel separable_behaviour(const std::vector<ProductState>& components, const ProjectorFamilies& projectors,
                                   const Scenario& s) {
    if (s.party_count() != 2) throw Error(ErrorKind::Input, "separable models need two parties");
    if (components.empty()) throw Error(ErrorKind::Validation, "separable model has no components");
    std::vector<std::size_t> dims = {static_cast<std::size_t>(components[0].rho_a.rows()),
                                     static_cast<std::size_t>(components[0].rho_b.rows())};
    check_families(s, dims, projectors, 1e-10);
    double total = 0;
    for (const auto& c : components) {
        if (!(c.weight >= 0)) throw Error(ErrorKind::Validation, "mixture weights must be non-negative");
        total += c.weight;
        check_state(c.rho_a, dims[0], 1e-10, "first-party state");
        check_state(c.rho_b, dims[1], 1e-10, "second-party state");
    }
    if (std::abs(total - 1) > 1e-10) throw Error(ErrorKind::Validation, "mixture weights must sum to 1");
    SeparableModel out;
    const auto& idx = s.index();
    out.behaviour.assign(idx.dimension(), 0.0);
    for (const auto& c : components) {
        out.weights.push_back(c.weight);
        out.factors_a.push_back(local_response(c.rho_a, s.party(0), projectors[0]));
        out.factors_b.push_back(local_response(c.rho_b, s.party(1), projectors[1]));
        const auto& fa = out.factors_a.back();
        const auto& fb = out.factors_b.back();
        for (std::size_t i = 0; i < idx.dimension(); ++i) {
            const auto key = idx.key(i);
            const auto& ctx = idx.joint_context(key.joint_context);
            out.behaviour[i] += c.weight * fa[s.party(0).local_offset(ctx[0]) + key.tuples[0]] *
                                fb[s.party(1).local_offset(ctx[1]) + key.tuples[1]];
        }
    }
    return out;
}

namespace {

CMatrix bloch(const std::array<double, 3>& r) {
    CMatrix m(2, 2);
    m(0, 0) = (1 + r[2]) / 2;
    m(1, 1) = (1 - r[2]) / 2;
    m(0, 1) = Complex(r[0], -r[1]) / 2.0;
    m(1, 0) = Complex(r[0], r[1]) / 2.0;
    return m;
}

std::array<double, 3> rational_direction(std::mt19937_64& rng) {
    static const std::array<std::array<double, 3>, 3> base = {{{0.6, 0.8, 0.0}, {1.0, 0.0, 0.0}, {0.8, 0.0, 0.6}}};
    std::uniform_int_distribution<int> pick(0, 2), perm(0, 5), coin(0, 1);
    auto v = base[static_cast<std::size_t>(pick(rng))];
    static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    const int k = perm(rng);
    std::array<double, 3> out{v[perms[k][0]], v[perms[k][1]], v[perms[k][2]]};
    for (auto& x : out) {
        if (coin(rng)) x = -x;
    }
    return out;
}

}  // namespace

SeparableSample random_separable_qubit_model(const Scenario& s, std::mt19937_64& rng, std::size_t max_components) {
    if (s.party_count() != 2) throw Error(ErrorKind::Input, "separable models need two parties");
    SeparableSample out;
    const CMatrix id = CMatrix::Identity(2, 2);
    for (const auto& p : s.parties()) {
        for (std::size_t m = 0; m < p.measurements().size(); ++m) {
            if (p.outcome_count(m) != 2) throw Error(ErrorKind::Input, "random qubit models need binary outcomes");
        }
        // Measurements linked through contexts share one axis.
        std::vector<std::size_t> group(p.measurements().size());
        for (std::size_t m = 0; m < group.size(); ++m) group[m] = m;
        std::function<std::size_t(std::size_t)> root = [&](std::size_t x) { return group[x] == x ? x : group[x] = root(group[x]); };
        for (const auto& c : p.contexts()) {
            for (std::size_t k = 1; k < c.size(); ++k) group[root(c[k])] = root(c[0]);
        }
        std::map<std::size_t, CMatrix> axis;
        std::vector<std::vector<CMatrix>> families;
        std::uniform_int_distribution<int> mode(0, 3);
        for (std::size_t m = 0; m < group.size(); ++m) {
            const std::size_t r = root(m);
            if (!axis.count(r)) axis[r] = bloch(rational_direction(rng));
            const bool linked = p.contexts_of(m).size() > 1 || std::any_of(p.contexts().begin(), p.contexts().end(), [&](const Context& c) {
                                    return c.size() > 1 && std::find(c.begin(), c.end(), m) != c.end();
                                });
            CMatrix proj = axis[r];
            if (linked) {
                switch (mode(rng)) {
                    case 0: break;
                    case 1: proj = id - proj; break;
                    case 2: proj = id; break;
                    default: proj = CMatrix::Zero(2, 2); break;
                }
            } else {
                proj = bloch(rational_direction(rng));
            }
            families.push_back({proj, id - proj});
        }
        out.projectors.push_back(std::move(families));
    }
    std::uniform_int_distribution<std::size_t> count(1, std::max<std::size_t>(1, max_components));
    std::uniform_int_distribution<int> weight(1, 3), length(0, 4);
    const std::size_t n = count(rng);
    std::vector<int> w(n);
    int total = 0;
    for (auto& x : w) total += x = weight(rng);
    for (std::size_t k = 0; k < n; ++k) {
        auto state = [&] {
            auto r = rational_direction(rng);
            const double scale = length(rng) / 4.0;
            for (auto& x : r) x *= scale;
            return bloch(r);
        };
        CMatrix a = state();
        CMatrix b = state();
        out.components.push_back({static_cast<double>(w[k]) / total, a, b});
    }
    return out;
}

namespace {

// Checks that the party's contexts are (M0,M1), (M1,M2), ..., (Mn-1,M0) with binary outcomes.
void require_cycle(const Party& p) {
    const std::size_t n = p.measurements().size();
    bool ok = n >= 3 && p.contexts().size() == n;
    for (std::size_t j = 0; ok && j < n; ++j) {
        ok = p.outcome_count(j) == 2 && p.contexts()[j] == Context{j, (j + 1) % n};
    }
    if (!ok) {
        throw Error(ErrorKind::Input, "party " + p.id() + " must have binary measurements M0..Mn-1 (n >= 3) with contexts "
                                      "(M0,M1), (M1,M2), ..., (Mn-1,M0)");
    }
}

}  // namespace

Behaviour pr_product_behaviour(const ScenarioPtr& s, const std::optional<MarginalBehaviour>& alice) {
    if (s->party_count() != 2) throw Error(ErrorKind::Input, "the PR product needs two parties");
    const Party& pa = s->party(0);
    const Party& pb = s->party(1);
    require_cycle(pb);
    RVector a(pa.local_dimension());
    if (alice) {
        if (!(alice->scenario() == *party_scenario(*s, 0))) throw Error(ErrorKind::Input, "first-party marginal has the wrong scenario");
        a = alice->values();
    } else {
        for (std::size_t c = 0; c < pa.contexts().size(); ++c) {
            for (std::size_t t = 0; t < pa.tuple_count(c); ++t) a[pa.local_offset(c) + t] = Rational(1, static_cast<unsigned long>(pa.tuple_count(c)));
        }
    }
    const std::size_t n = pb.contexts().size();
    const auto& idx = s->index();
    RVector v(idx.dimension(), 0);
    for (std::size_t i = 0; i < idx.dimension(); ++i) {
        const auto key = idx.key(i);
        const auto& ctx = idx.joint_context(key.joint_context);
        const auto outs = pb.decode_tuple(ctx[1], key.tuples[1]);
        const bool differ = outs[0] != outs[1];
        if (differ == (ctx[1] == n - 1)) v[i] = a[pa.local_offset(ctx[0]) + key.tuples[0]] / 2;
    }
    return Behaviour(s, std::move(v));
}

Rational cycle_correlator_sum(const MarginalBehaviour& m) {
    const Scenario& s = m.scenario();
    if (s.party_count() != 1) throw Error(ErrorKind::Input, "expected a single-party behaviour");
    const Party& p = s.party(0);
    require_cycle(p);
    Rational total = 0;
    for (std::size_t c = 0; c < p.contexts().size(); ++c) {
        Rational corr = 0;
        for (std::size_t t = 0; t < p.tuple_count(c); ++t) {
            auto outs = p.decode_tuple(c, t);
            const Rational& q = m[p.local_offset(c) + t];
            corr += outs[0] == outs[1] ? q : Rational(-q);
        }
        total += c + 1 == p.contexts().size() ? Rational(-corr) : corr;
    }
    return total;
}

FacetInequality chsh_functional(const Scenario& s) {
    auto shape_ok = [](const Party& p) {
        if (p.measurements().size() != 2 || p.contexts().size() != 2) return false;
        for (std::size_t c = 0; c < 2; ++c) {
            if (p.contexts()[c].size() != 1 || p.outcome_count(p.contexts()[c][0]) != 2) return false;
        }
        return true;
    };
    if (s.party_count() != 2 || !shape_ok(s.party(0)) || !shape_ok(s.party(1))) {
        throw Error(ErrorKind::Input, "the CHSH expression needs two parties with two binary measurements each");
    }
    const auto& idx = s.index();
    FacetInequality f{RVector(idx.dimension(), 0), 2, "CHSH"};
    for (std::size_t i = 0; i < idx.dimension(); ++i) {
        const auto key = idx.key(i);
        const auto& ctx = idx.joint_context(key.joint_context);
        const std::size_t x = s.party(0).contexts()[ctx[0]][0];
        const std::size_t y = s.party(1).contexts()[ctx[1]][0];
        int sign = key.tuples[0] == key.tuples[1] ? 1 : -1;
        if (x == 1 && y == 1) sign = -sign;
        f.coeffs[i] = sign;
    }
    return f;
}

SearchResult violation_search(const FacetInequality& f, const Scenario& s, const SearchOptions& options) {
    if (f.coeffs.size() != s.dimension()) throw Error(ErrorKind::Input, "inequality does not match the scenario");
    for (const auto& p : s.parties()) {
        for (std::size_t m = 0; m < p.measurements().size(); ++m) {
            if (p.outcome_count(m) != 2) throw Error(ErrorKind::Input, "the quantum search supports binary outcomes only");
        }
    }
    std::vector<std::size_t> dims = options.dims.empty() ? std::vector<std::size_t>(s.party_count(), 2) : options.dims;
    if (dims.size() != s.party_count()) throw Error(ErrorKind::Input, "one dimension per party is required");
    const auto& idx = s.index();
    std::vector<Term> terms;
    for (std::size_t i = 0; i < idx.dimension(); ++i) {
        if (sgn(f.coeffs[i]) == 0) continue;
        auto key = idx.key(i);
        terms.push_back({key.joint_context, key.tuples, f.coeffs[i].get_d()});
    }
    const unsigned restarts = std::max(1u, options.restarts);
    struct Outcome {
        bool ok = false;
        double value = 0;
        QuantumModel model;
        RealBehaviour behaviour;
    };
    std::vector<Outcome> results(restarts);
    auto work = [&](unsigned first, unsigned stride) {
        for (unsigned r = first; r < restarts; r += stride) {
            std::mt19937_64 rng(options.seed * 1000003ULL + r);
            Seesaw seesaw(s, terms, dims);
            seesaw.randomize(rng);
            seesaw.run(options.max_iterations);
            Outcome o;
            o.model = seesaw.model();
            try {
                o.behaviour = evaluate(o.model, s);
                o.value = value(f, o.behaviour);
                o.ok = true;
            } catch (const Error&) {
                o.ok = false;
            }
            results[r] = std::move(o);
        }
    };
    const unsigned workers = std::max(1u, std::min(options.workers, restarts));
    if (workers == 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
        for (auto& t : pool) t.join();
    }
    SearchResult best;
    best.restarts_run = restarts;
    bool found = false;
    for (auto& o : results) {
        if (!o.ok || (found && o.value <= best.value)) continue;
        found = true;
        best.value = o.value;
        best.model = std::move(o.model);
        best.behaviour = std::move(o.behaviour);
    }
    if (!found) throw Error(ErrorKind::Verification, "no restart produced a valid quantum model");
    return best;
}

}  // namespace extbell
