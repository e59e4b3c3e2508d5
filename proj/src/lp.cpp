// Copyright (c) extbell contributors.
// SPDX-License-Identifier: Apache-2.0
#include "extbell/lp.hpp"

#include "extbell/error.hpp"

namespace extbell {

void LPProblem::validate() const {
    auto bad = [](const std::string& what) { throw Error(ErrorKind::Input, "LP: " + what); };
    if (!objective.empty() && objective.size() != num_vars) bad("objective has wrong length");
    if (sense != Sense::Feasibility && objective.size() != num_vars) bad("objective missing");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].coeffs.size() != num_vars) bad("row " + std::to_string(i) + " has wrong length");
    }
    if (!lower.empty() && lower.size() != num_vars) bad("lower bounds have wrong length");
    if (!upper.empty() && upper.size() != num_vars) bad("upper bounds have wrong length");
    for (std::size_t j = 0; j < num_vars && !lower.empty() && !upper.empty(); ++j) {
        if (lower[j] && upper[j] && *upper[j] < *lower[j]) bad("crossed bounds on variable " + std::to_string(j));
    }
}

namespace {

std::optional<Rational> lower_of(const LPProblem& p, std::size_t j) {
    return p.lower.empty() ? std::optional<Rational>(Rational(0)) : p.lower[j];
}

std::optional<Rational> upper_of(const LPProblem& p, std::size_t j) {
    return p.upper.empty() ? std::nullopt : p.upper[j];
}

// Standard form: min c.y, T y = b, y >= 0, b >= 0, with one artificial per row.
class Tableau {
  public:
    explicit Tableau(const LPProblem& p) : p_(p) {
        const std::size_t n = p.num_vars;
        shift_.assign(n, 0);
        for (std::size_t j = 0; j < n; ++j) {
            auto lo = lower_of(p, j);
            if (lo) {
                shift_[j] = *lo;
                var_cols_.push_back({{structural_++, 1}});
            } else {
                std::size_t plus = structural_++;
                std::size_t minus = structural_++;
                var_cols_.push_back({{plus, 1}, {minus, -1}});
            }
        }
        // original rows, then one row per finite upper bound
        for (const auto& r : p.rows) {
            rows_.push_back(expand(r.coeffs));
            relations_.push_back(r.relation);
            rhs_.push_back(r.rhs - dot(r.coeffs, shift_));
        }
        for (std::size_t j = 0; j < n; ++j) {
            auto up = upper_of(p, j);
            if (!up) continue;
            RVector e(n, 0);
            e[j] = 1;
            rows_.push_back(expand(e));
            relations_.push_back(Relation::LessEq);
            rhs_.push_back(*up - shift_[j]);
            bound_rows_.push_back(j);
        }
        m_ = rows_.size();
        std::size_t slacks = 0;
        for (auto rel : relations_) slacks += rel != Relation::Equal;
        art_start_ = structural_ + slacks;
        cols_ = art_start_ + m_;
        t_.assign(m_, RVector(cols_ + 1, 0));
        sigma_.assign(m_, 1);
        basis_.resize(m_);
        std::size_t slack = structural_;
        for (std::size_t r = 0; r < m_; ++r) {
            for (std::size_t c = 0; c < structural_; ++c) t_[r][c] = rows_[r][c];
            if (relations_[r] == Relation::LessEq) t_[r][slack++] = 1;
            else if (relations_[r] == Relation::GreaterEq) t_[r][slack++] = -1;
            t_[r][cols_] = rhs_[r];
            if (sgn(rhs_[r]) < 0) {
                sigma_[r] = -1;
                for (auto& q : t_[r]) q = -q;
            }
            t_[r][art_start_ + r] = 1;
            basis_[r] = art_start_ + r;
        }
    }

    LPResult run() {
        LPResult out;
        // phase 1
        z_.assign(cols_ + 1, 0);
        for (std::size_t r = 0; r < m_; ++r) {
            for (std::size_t c = 0; c < art_start_; ++c) z_[c] -= t_[r][c];
            z_[cols_] -= t_[r][cols_];
        }
        iterate(out);
        if (sgn(z_[cols_]) != 0) {
            out.status = LPStatus::Infeasible;
            RVector pi(m_);
            for (std::size_t r = 0; r < m_; ++r) pi[r] = 1 - z_[art_start_ + r];
            to_original(pi, -1, out.farkas, out.farkas_bounds);
            return out;
        }
        drive_out_artificials(out);

        const bool maximize = p_.sense == Sense::Maximize;
        RVector cost(cols_, 0);
        Rational constant = 0;
        if (p_.sense != Sense::Feasibility) {
            for (std::size_t j = 0; j < p_.num_vars; ++j) {
                Rational c = maximize ? -p_.objective[j] : p_.objective[j];
                for (auto [col, sign] : var_cols_[j]) cost[col] = sign * c;
                constant += c * shift_[j];
            }
        }
        z_.assign(cols_ + 1, 0);
        for (std::size_t c = 0; c < cols_; ++c) z_[c] = cost[c];
        for (std::size_t r = 0; r < m_; ++r) {
            const Rational& cb = cost[basis_[r]];
            if (sgn(cb) == 0) continue;
            for (std::size_t c = 0; c <= cols_; ++c) {
                if (sgn(t_[r][c]) != 0) z_[c] -= cb * t_[r][c];
            }
        }
        std::optional<std::size_t> unbounded_col = iterate(out);
        out.primal = primal();
        if (unbounded_col) {
            out.status = LPStatus::Unbounded;
            RVector y(cols_, 0);
            y[*unbounded_col] = 1;
            for (std::size_t r = 0; r < m_; ++r) y[basis_[r]] = -t_[r][*unbounded_col];
            out.ray = to_x(y, false);
            return out;
        }
        out.status = LPStatus::Optimal;
        if (p_.sense != Sense::Feasibility) out.value = dot(p_.objective, out.primal);
        RVector pi(m_);
        Rational dual = constant;
        for (std::size_t r = 0; r < m_; ++r) {
            pi[r] = -z_[art_start_ + r];
            dual += pi[r] * t_rhs_original(r);
        }
        out.dual_value = maximize ? -dual : dual;
        to_original(pi, maximize ? -1 : 1, out.duals, out.bound_duals);
        return out;
    }

  private:
    RVector expand(const RVector& a) const {
        RVector row(structural_, 0);
        for (std::size_t j = 0; j < a.size(); ++j) {
            if (sgn(a[j]) == 0) continue;
            for (auto [col, sign] : var_cols_[j]) row[col] = sign * a[j];
        }
        return row;
    }

    Rational t_rhs_original(std::size_t r) const { return sigma_[r] * rhs_[r]; }

    void pivot(std::size_t r, std::size_t c) {
        Rational inv = 1 / t_[r][c];
        for (auto& q : t_[r]) {
            if (sgn(q) != 0) q *= inv;
        }
        std::vector<std::size_t> nz;
        for (std::size_t k = 0; k <= cols_; ++k) {
            if (sgn(t_[r][k]) != 0) nz.push_back(k);
        }
        auto eliminate = [&](RVector& row) {
            if (sgn(row[c]) == 0) return;
            Rational f = row[c];
            for (auto k : nz) row[k] -= f * t_[r][k];
        };
        for (std::size_t i = 0; i < m_; ++i) {
            if (i != r) eliminate(t_[i]);
        }
        eliminate(z_);
        basis_[r] = c;
    }

    // Bland's rule. Returns the entering column when the objective is unbounded.
    // Artificial columns never re-enter the basis.
    std::optional<std::size_t> iterate(LPResult& out) {
        while (true) {
            std::size_t enter = cols_;
            for (std::size_t c = 0; c < art_start_; ++c) {
                if (sgn(z_[c]) < 0) {
                    enter = c;
                    break;
                }
            }
            if (enter == cols_) return std::nullopt;
            std::size_t leave = m_;
            Rational best;
            for (std::size_t r = 0; r < m_; ++r) {
                if (sgn(t_[r][enter]) <= 0) continue;
                Rational ratio = t_[r][cols_] / t_[r][enter];
                if (leave == m_ || ratio < best || (ratio == best && basis_[r] < basis_[leave])) {
                    leave = r;
                    best = ratio;
                }
            }
            if (leave == m_) return enter;
            pivot(leave, enter);
            ++out.pivots;
        }
    }

    void drive_out_artificials(LPResult& out) {
        for (std::size_t r = 0; r < m_; ++r) {
            if (basis_[r] < art_start_) continue;
            for (std::size_t c = 0; c < art_start_; ++c) {
                if (sgn(t_[r][c]) != 0) {
                    pivot(r, c);
                    ++out.pivots;
                    break;
                }
            }
            // otherwise the row is redundant; its artificial stays basic at zero
        }
    }

    RVector primal() const {
        RVector y(cols_, 0);
        for (std::size_t r = 0; r < m_; ++r) y[basis_[r]] = t_[r][cols_];
        return to_x(y, true);
    }

    RVector to_x(const RVector& y, bool with_shift) const {
        RVector x(p_.num_vars, 0);
        for (std::size_t j = 0; j < p_.num_vars; ++j) {
            if (with_shift) x[j] = shift_[j];
            for (auto [col, sign] : var_cols_[j]) x[j] += sign * y[col];
        }
        return x;
    }

    // Multipliers of the standard rows expressed on the original rows and bounds.
    void to_original(const RVector& pi, int scale, RVector& rows, RVector& bounds) const {
        rows.assign(p_.rows.size(), 0);
        bounds.assign(p_.num_vars, 0);
        for (std::size_t r = 0; r < m_; ++r) {
            Rational v = scale * sigma_[r] * pi[r];
            if (r < p_.rows.size()) rows[r] = v;
            else bounds[bound_rows_[r - p_.rows.size()]] = v;
        }
    }

    const LPProblem& p_;
    std::vector<std::vector<std::pair<std::size_t, int>>> var_cols_;
    RVector shift_;
    std::size_t structural_ = 0;
    std::vector<RVector> rows_;
    std::vector<Relation> relations_;
    RVector rhs_;
    std::vector<std::size_t> bound_rows_;
    std::size_t m_ = 0, cols_ = 0, art_start_ = 0;
    std::vector<RVector> t_;
    RVector z_;
    std::vector<int> sigma_;
    std::vector<std::size_t> basis_;
};

}  // namespace

LPResult solve(const LPProblem& p) {
    p.validate();
    Tableau t(p);
    return t.run();
}

bool verify_farkas(const LPProblem& p, const RVector& farkas, const RVector& farkas_bounds) {
    if (farkas.size() != p.rows.size() || farkas_bounds.size() != p.num_vars) return false;
    RVector g(p.num_vars, 0);
    Rational rhs = 0;
    for (std::size_t i = 0; i < p.rows.size(); ++i) {
        const Rational& y = farkas[i];
        if (p.rows[i].relation == Relation::LessEq && sgn(y) < 0) return false;
        if (p.rows[i].relation == Relation::GreaterEq && sgn(y) > 0) return false;
        if (sgn(y) == 0) continue;
        for (std::size_t j = 0; j < p.num_vars; ++j) g[j] += y * p.rows[i].coeffs[j];
        rhs += y * p.rows[i].rhs;
    }
    for (std::size_t j = 0; j < p.num_vars; ++j) {
        const Rational& z = farkas_bounds[j];
        if (sgn(z) == 0) continue;
        auto up = upper_of(p, j);
        if (sgn(z) < 0 || !up) return false;
        g[j] += z;
        rhs += z * *up;
    }
    // minimum of g.x over the lower-bound box must exceed rhs
    Rational min = 0;
    for (std::size_t j = 0; j < p.num_vars; ++j) {
        if (sgn(g[j]) == 0) continue;
        auto lo = lower_of(p, j);
        if (!lo || sgn(g[j]) < 0) return false;
        min += g[j] * *lo;
    }
    return min > rhs;
}

bool is_feasible(const LPProblem& p, const RVector& x) {
    if (x.size() != p.num_vars) return false;
    for (std::size_t j = 0; j < p.num_vars; ++j) {
        auto lo = lower_of(p, j);
        auto up = upper_of(p, j);
        if (lo && x[j] < *lo) return false;
        if (up && x[j] > *up) return false;
    }
    for (const auto& r : p.rows) {
        Rational v = dot(r.coeffs, x);
        if (r.relation == Relation::LessEq && v > r.rhs) return false;
        if (r.relation == Relation::GreaterEq && v < r.rhs) return false;
        if (r.relation == Relation::Equal && v != r.rhs) return false;
    }
    return true;
}

}  // namespace extbell
