// Copyright (c) extbell contributors.
// SPDX-License-Identifier: Apache-2.0
#include "extbell/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace extbell {

namespace {

struct Line {
    std::size_t number = 0;
    std::vector<std::string> tokens;
};

std::vector<Line> lex(std::string_view text) {
    std::vector<Line> out;
    std::size_t number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view raw = text.substr(pos, end - pos);
        ++number;
        if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        Line line{number, {}};
        std::size_t i = 0;
        while (i < raw.size()) {
            while (i < raw.size() && (raw[i] == ' ' || raw[i] == '\t' || raw[i] == '\r')) ++i;
            std::size_t j = i;
            while (j < raw.size() && raw[j] != ' ' && raw[j] != '\t' && raw[j] != '\r') ++j;
            if (j > i) line.tokens.emplace_back(raw.substr(i, j - i));
            i = j;
        }
        if (!line.tokens.empty()) out.push_back(std::move(line));
        if (end == text.size()) break;
        pos = end + 1;
    }
    return out;
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
    throw Error(ErrorKind::Input, "line " + std::to_string(line) + ": " + what);
}

Rational rational_at(const Line& l, std::size_t k, const std::string& where = {}) {
    if (k >= l.tokens.size()) fail(l.number, "missing value" + (where.empty() ? "" : " for " + where));
    if (!is_rational_literal(l.tokens[k])) {
        fail(l.number, "malformed rational '" + l.tokens[k] + "'" + (where.empty() ? "" : " at " + where));
    }
    return parse_rational(l.tokens[k]);
}

std::size_t count_at(const Line& l, std::size_t k) {
    if (k >= l.tokens.size()) fail(l.number, "missing count");
    const auto& t = l.tokens[k];
    if (t.empty() || !std::all_of(t.begin(), t.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        fail(l.number, "expected a non-negative integer, got '" + t + "'");
    }
    return std::stoul(t);
}

void expect_keyword(const Line& l, const std::string& kw) {
    if (l.tokens[0] != kw) fail(l.number, "expected '" + kw + "', got '" + l.tokens[0] + "'");
}

void check_scenario_name(const Line& l, const Scenario& s) {
    if (l.tokens.size() != 2) fail(l.number, "expected 'scenario NAME'");
    if (l.tokens[1] != s.name()) {
        fail(l.number, "file is for scenario '" + l.tokens[1] + "' but scenario '" + s.name() + "' was given");
    }
}

std::string pad(const std::string& s, std::size_t w) { return s + std::string(w > s.size() ? w - s.size() : 0, ' '); }

std::string join_row(const std::vector<std::string>& cells, const std::vector<std::size_t>& widths) {
    std::string out;
    for (std::size_t k = 0; k < cells.size(); ++k) {
        if (k > 0) out += "  ";
        out += k + 1 == cells.size() ? cells[k] : pad(cells[k], widths[k]);
    }
    return out;
}

// Splits "p(OUTCOMES|CONTEXTS)" into its two labels.
bool split_coordinate(std::string_view tok, std::string_view& column, std::string_view& row) {
    if (tok.size() < 5 || tok.substr(0, 2) != "p(" || tok.back() != ')') return false;
    auto bar = tok.find('|');
    if (bar == std::string_view::npos) return false;
    column = tok.substr(2, bar - 2);
    row = tok.substr(bar + 1, tok.size() - bar - 2);
    return true;
}

// Parses sparse terms up to a "<= BOUND" line starting at lines[i].
FacetInequality parse_terms(const std::vector<Line>& lines, std::size_t& i, const Scenario& s) {
    FacetInequality f{RVector(s.dimension(), 0), 0, {}};
    std::vector<bool> seen(s.dimension(), false);
    for (; i < lines.size(); ++i) {
        const Line& l = lines[i];
        if (l.tokens[0] == "<=") {
            if (l.tokens.size() != 2) fail(l.number, "expected '<= BOUND'");
            f.bound = rational_at(l, 1, "bound");
            ++i;
            return f;
        }
        for (std::size_t k = 0; k < l.tokens.size(); ++k) {
            Rational coef = 1;
            std::string_view tok = l.tokens[k];
            if (tok[0] == '+' || tok[0] == '-') {
                if (tok.size() > 1 && tok[1] == 'p') {
                    coef = tok[0] == '-' ? -1 : 1;
                    tok = tok.substr(1);
                } else {
                    std::string lit(tok[0] == '+' ? tok.substr(1) : tok);
                    if (!is_rational_literal(lit)) fail(l.number, "malformed coefficient '" + std::string(tok) + "'");
                    coef = parse_rational(lit);
                    if (++k >= l.tokens.size()) fail(l.number, "coefficient without a probability term");
                    tok = l.tokens[k];
                }
            } else if (tok[0] != 'p') {
                if (!is_rational_literal(tok)) fail(l.number, "malformed coefficient '" + std::string(tok) + "'");
                coef = parse_rational(tok);
                if (++k >= l.tokens.size()) fail(l.number, "coefficient without a probability term");
                tok = l.tokens[k];
            }
            std::string_view column, row;
            if (!split_coordinate(tok, column, row)) fail(l.number, "expected a term p(OUTCOMES|CONTEXTS), got '" + std::string(tok) + "'");
            std::size_t pos;
            try {
                pos = coordinate_of(s, row, column);
            } catch (const Error& e) {
                fail(l.number, e.what());
            }
            if (seen[pos]) fail(l.number, "term " + std::string(tok) + " appears twice");
            seen[pos] = true;
            f.coeffs[pos] = coef;
        }
    }
    throw Error(ErrorKind::Input, "inequality is missing its '<= BOUND' line");
}

std::string signed_rational(const Rational& q) { return (sgn(q) >= 0 ? "+" : "") + to_string(q); }

std::string terms_text(const RVector& coeffs, const Rational& bound, const Scenario& s) {
    std::string out;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (sgn(coeffs[i]) == 0) continue;
        out += signed_rational(coeffs[i]) + " " + coordinate_name(s, i) + "\n";
    }
    out += "<= " + to_string(bound) + "\n";
    return out;
}

std::vector<std::string> joint_columns(const Scenario& s, JointDistribution::Mode mode) {
    std::vector<std::string> cols;
    for (const auto& p : s.parties()) {
        if (mode == JointDistribution::Mode::PerMeasurement) {
            for (const auto& m : p.measurements()) cols.push_back(m.label);
        } else {
            for (std::size_t c = 0; c < p.contexts().size(); ++c) cols.push_back(p.context_label(c));
        }
    }
    return cols;
}

}  // namespace

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Input, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Input, "cannot write " + path);
    out << text;
}

Scenario parse_scenario(std::string_view text) {
    auto lines = lex(text);
    if (lines.empty()) throw Error(ErrorKind::Input, "empty scenario file");
    const Line& head = lines[0];
    expect_keyword(head, "scenario");
    if (head.tokens.size() != 2) fail(head.number, "expected 'scenario NAME'");
    struct PartyDraft {
        std::size_t line;
        std::string id;
        std::vector<Measurement> measurements;
        std::vector<std::vector<std::string>> contexts;
    };
    std::vector<PartyDraft> drafts;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const Line& l = lines[i];
        const auto& t = l.tokens;
        if (t[0] == "party") {
            if (t.size() != 2) fail(l.number, "expected 'party ID'");
            drafts.push_back({l.number, t[1], {}, {}});
        } else if (t[0] == "measurement") {
            if (drafts.empty()) fail(l.number, "measurement outside a party block");
            if (t.size() < 4 || t[2] != ":") fail(l.number, "expected 'measurement LABEL : OUTCOME...'");
            drafts.back().measurements.push_back(Measurement{t[1], {t.begin() + 3, t.end()}});
        } else if (t[0] == "context") {
            if (drafts.empty()) fail(l.number, "context outside a party block");
            if (t.size() < 2) fail(l.number, "empty context");
            drafts.back().contexts.emplace_back(t.begin() + 1, t.end());
        } else {
            fail(l.number, "unknown keyword '" + t[0] + "'");
        }
    }
    std::vector<Party> parties;
    for (auto& d : drafts) {
        try {
            parties.emplace_back(d.id, std::move(d.measurements), std::move(d.contexts));
        } catch (const Error& e) {
            throw Error(e.kind(), "line " + std::to_string(d.line) + ": " + e.what());
        }
    }
    return Scenario(head.tokens[1], std::move(parties));
}

std::string serialize_scenario(const Scenario& s) {
    std::string out = "scenario " + s.name() + "\n";
    for (const auto& p : s.parties()) {
        out += "party " + p.id() + "\n";
        for (const auto& m : p.measurements()) {
            out += "  measurement " + m.label + " :";
            for (const auto& o : m.outcomes) out += " " + o;
            out += "\n";
        }
        for (const auto& c : p.contexts()) {
            out += "  context";
            for (auto m : c) out += " " + p.measurements()[m].label;
            out += "\n";
        }
    }
    return out;
}

ScenarioPtr load_scenario(const std::string& path) {
    try {
        return std::make_shared<Scenario>(parse_scenario(read_text_file(path)));
    } catch (const Error& e) {
        throw Error(e.kind(), path + ": " + e.what());
    }
}

std::string scenario_hash(const Scenario& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : serialize_scenario(s)) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::size_t coordinate_of(const Scenario& s, std::string_view row, std::string_view column) {
    const auto& idx = s.index();
    for (std::size_t jc = 0; jc < idx.joint_context_count(); ++jc) {
        if (s.row_label(jc) != row) continue;
        for (std::size_t t = 0; t < idx.block_size(jc); ++t) {
            if (s.column_label(jc, t) == column) return idx.offset(jc) + t;
        }
        throw Error(ErrorKind::Input, "context " + std::string(row) + " has no outcome " + std::string(column));
    }
    throw Error(ErrorKind::Input, "unknown context " + std::string(row));
}

std::string coordinate_name(const Scenario& s, std::size_t position) {
    auto key = s.index().key(position);
    return "p(" + s.column_label(key.joint_context, position - s.index().offset(key.joint_context)) + "|" +
           s.row_label(key.joint_context) + ")";
}

Behaviour parse_behaviour_table(std::string_view text, const ScenarioPtr& s) {
    auto lines = lex(text);
    if (lines.size() < 2) throw Error(ErrorKind::Input, "behaviour table needs a scenario line and a columns line");
    expect_keyword(lines[0], "scenario");
    check_scenario_name(lines[0], *s);
    expect_keyword(lines[1], "columns");
    std::vector<std::string> columns(lines[1].tokens.begin() + 1, lines[1].tokens.end());
    if (columns.empty()) fail(lines[1].number, "no columns");
    const auto& idx = s->index();
    std::map<std::string, std::size_t> rows;
    for (std::size_t jc = 0; jc < idx.joint_context_count(); ++jc) rows[s->row_label(jc)] = jc;
    RVector values(idx.dimension(), 0);
    std::vector<bool> done(idx.joint_context_count(), false);
    for (std::size_t i = 2; i < lines.size(); ++i) {
        const Line& l = lines[i];
        auto it = rows.find(l.tokens[0]);
        if (it == rows.end()) fail(l.number, "unknown row label '" + l.tokens[0] + "'");
        const std::size_t jc = it->second;
        if (done[jc]) fail(l.number, "row " + l.tokens[0] + " given twice");
        done[jc] = true;
        if (l.tokens.size() != columns.size() + 1) {
            fail(l.number, "row " + l.tokens[0] + " has " + std::to_string(l.tokens.size() - 1) + " cells, expected " +
                               std::to_string(columns.size()));
        }
        std::map<std::string, std::size_t> local;
        for (std::size_t t = 0; t < idx.block_size(jc); ++t) local[s->column_label(jc, t)] = t;
        std::size_t filled = 0;
        for (std::size_t k = 0; k < columns.size(); ++k) {
            const std::string& cell = l.tokens[k + 1];
            auto lt = local.find(columns[k]);
            const std::string where = "row " + l.tokens[0] + ", column " + columns[k];
            if (lt == local.end()) {
                if (cell != "-") fail(l.number, "cell at " + where + " must be '-' (no such outcome)");
                continue;
            }
            if (cell == "-") fail(l.number, "missing cell at " + where);
            values[idx.offset(jc) + lt->second] = rational_at(l, k + 1, where);
            ++filled;
        }
        if (filled != idx.block_size(jc)) fail(l.number, "row " + l.tokens[0] + " does not cover all of its outcomes");
    }
    for (std::size_t jc = 0; jc < done.size(); ++jc) {
        if (!done[jc]) throw Error(ErrorKind::Input, "behaviour table is missing row " + s->row_label(jc));
    }
    return Behaviour(s, std::move(values));
}

std::string serialize_behaviour_table(const Behaviour& b) {
    const Scenario& s = b.scenario();
    const auto& idx = s.index();
    std::vector<std::string> columns;
    for (std::size_t jc = 0; jc < idx.joint_context_count(); ++jc) {
        for (std::size_t t = 0; t < idx.block_size(jc); ++t) {
            auto c = s.column_label(jc, t);
            if (std::find(columns.begin(), columns.end(), c) == columns.end()) columns.push_back(c);
        }
    }
    std::vector<std::vector<std::string>> grid;
    std::vector<std::string> header{"columns"};
    header.insert(header.end(), columns.begin(), columns.end());
    grid.push_back(header);
    for (std::size_t jc = 0; jc < idx.joint_context_count(); ++jc) {
        std::vector<std::string> row{s.row_label(jc)};
        for (const auto& c : columns) {
            std::string cell = "-";
            for (std::size_t t = 0; t < idx.block_size(jc); ++t) {
                if (s.column_label(jc, t) == c) cell = to_string(b[idx.offset(jc) + t]);
            }
            row.push_back(cell);
        }
        grid.push_back(row);
    }
    std::vector<std::size_t> widths(header.size(), 0);
    for (const auto& r : grid) {
        for (std::size_t k = 0; k < r.size(); ++k) widths[k] = std::max(widths[k], r[k].size());
    }
    std::string out = "scenario " + s.name() + "\n";
    for (const auto& r : grid) out += join_row(r, widths) + "\n";
    return out;
}

Behaviour load_behaviour(const std::string& path, const ScenarioPtr& s) {
    try {
        return parse_behaviour_table(read_text_file(path), s);
    } catch (const Error& e) {
        throw Error(e.kind(), path + ": " + e.what());
    }
}

NamedInequality parse_inequality(std::string_view text, const Scenario& s) {
    auto lines = lex(text);
    if (lines.empty()) throw Error(ErrorKind::Input, "empty inequality file");
    NamedInequality out;
    std::size_t i = 0;
    if (lines[i].tokens[0] == "inequality") {
        if (lines[i].tokens.size() != 2) fail(lines[i].number, "expected 'inequality NAME'");
        out.name = lines[i].tokens[1];
        ++i;
    }
    if (i < lines.size() && lines[i].tokens[0] == "scenario") {
        check_scenario_name(lines[i], s);
        ++i;
    }
    out.inequality = parse_terms(lines, i, s);
    out.inequality.provenance = out.name;
    if (i != lines.size()) fail(lines[i].number, "unexpected text after the bound");
    return out;
}

std::string serialize_inequality(const FacetInequality& f, const Scenario& s, const std::string& name) {
    std::string out;
    if (!name.empty()) out += "inequality " + name + "\n";
    out += "scenario " + s.name() + "\n";
    out += terms_text(f.coeffs, f.bound, s);
    return out;
}

NamedInequality load_inequality(const std::string& path, const Scenario& s) {
    try {
        return parse_inequality(read_text_file(path), s);
    } catch (const Error& e) {
        throw Error(e.kind(), path + ": " + e.what());
    }
}

HRep parse_hrep(std::string_view text) {
    auto lines = lex(text);
    if (lines.empty()) throw Error(ErrorKind::Input, "empty H-representation");
    expect_keyword(lines[0], "hrep");
    HRep h;
    h.dimension = count_at(lines[0], 1);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const Line& l = lines[i];
        const bool eq = l.tokens[0] == "eq";
        if (!eq && l.tokens[0] != "ineq") fail(l.number, "expected 'eq' or 'ineq'");
        if (l.tokens.size() != h.dimension + 3) fail(l.number, "row has the wrong number of coefficients");
        LinearConstraint c{RVector(h.dimension), 0};
        for (std::size_t k = 0; k < h.dimension; ++k) c.coeffs[k] = rational_at(l, k + 1);
        if (l.tokens[h.dimension + 1] != (eq ? "=" : "<=")) fail(l.number, eq ? "expected '='" : "expected '<='");
        c.rhs = rational_at(l, h.dimension + 2);
        (eq ? h.equalities : h.inequalities).push_back(std::move(c));
    }
    return h;
}

std::string serialize_hrep(const HRep& h) {
    std::string out = "hrep " + std::to_string(h.dimension) + "\n";
    auto row = [&](const char* kw, const LinearConstraint& c, const char* rel) {
        out += kw;
        for (const auto& q : c.coeffs) out += " " + to_string(q);
        out += std::string(" ") + rel + " " + to_string(c.rhs) + "\n";
    };
    for (const auto& e : h.equalities) row("eq", e, "=");
    for (const auto& c : h.inequalities) row("ineq", c, "<=");
    return out;
}

VRep parse_vrep(std::string_view text) {
    auto lines = lex(text);
    if (lines.empty()) throw Error(ErrorKind::Input, "empty V-representation");
    expect_keyword(lines[0], "vrep");
    VRep v;
    v.dimension = count_at(lines[0], 1);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const Line& l = lines[i];
        expect_keyword(l, "vertex");
        if (l.tokens.size() != v.dimension + 1) fail(l.number, "vertex has the wrong number of coordinates");
        RVector x(v.dimension);
        for (std::size_t k = 0; k < v.dimension; ++k) x[k] = rational_at(l, k + 1);
        v.vertices.push_back(std::move(x));
    }
    return v;
}

std::string serialize_vrep(const VRep& v) {
    std::string out = "vrep " + std::to_string(v.dimension) + "\n";
    for (const auto& x : v.vertices) {
        out += "vertex";
        for (const auto& q : x) out += " " + to_string(q);
        out += "\n";
    }
    return out;
}

std::string serialize_certificate(const Certificate& c, const Scenario& s) {
    std::string out;
    if (c.is_decomposition()) {
        out = "certificate decomposition\n";
        for (const auto& [k, w] : c.weights) out += "weight " + std::to_string(k) + " " + to_string(w) + "\n";
        return out;
    }
    out = "certificate separation\nvalue " + to_string(c.value) + "\n";
    out += terms_text(c.coeffs, c.bound, s);
    return out;
}

Certificate parse_certificate(std::string_view text, const Scenario& s) {
    auto lines = lex(text);
    if (lines.empty()) throw Error(ErrorKind::Input, "empty certificate");
    expect_keyword(lines[0], "certificate");
    if (lines[0].tokens.size() != 2) fail(lines[0].number, "expected 'certificate decomposition|separation'");
    Certificate c;
    if (lines[0].tokens[1] == "decomposition") {
        c.kind = Certificate::Kind::Decomposition;
        for (std::size_t i = 1; i < lines.size(); ++i) {
            const Line& l = lines[i];
            expect_keyword(l, "weight");
            if (l.tokens.size() != 3) fail(l.number, "expected 'weight INDEX VALUE'");
            c.weights.emplace_back(count_at(l, 1), rational_at(l, 2));
        }
        return c;
    }
    if (lines[0].tokens[1] != "separation") fail(lines[0].number, "unknown certificate kind '" + lines[0].tokens[1] + "'");
    c.kind = Certificate::Kind::Separation;
    if (lines.size() < 2) throw Error(ErrorKind::Input, "separation certificate without value");
    expect_keyword(lines[1], "value");
    c.value = rational_at(lines[1], 1);
    std::size_t i = 2;
    FacetInequality f = parse_terms(lines, i, s);
    if (i != lines.size()) fail(lines[i].number, "unexpected text after the bound");
    c.coeffs = std::move(f.coeffs);
    c.bound = f.bound;
    return c;
}

std::string serialize_joint(const JointDistribution& w, const Scenario& s) {
    const bool per_measurement = w.mode == JointDistribution::Mode::PerMeasurement;
    std::vector<std::vector<std::string>> grid;
    std::vector<std::string> header{"columns"};
    auto cols = joint_columns(s, w.mode);
    header.insert(header.end(), cols.begin(), cols.end());
    header.push_back("weight");
    grid.push_back(header);
    for (const auto& [key, weight] : w.support) {
        std::vector<std::string> row{"point"};
        std::size_t k = 0;
        for (const auto& p : s.parties()) {
            if (per_measurement) {
                for (std::size_t m = 0; m < p.measurements().size(); ++m, ++k) row.push_back(p.measurements()[m].outcomes[key[k]]);
            } else {
                for (std::size_t c = 0; c < p.contexts().size(); ++c, ++k) row.push_back(p.tuple_label(c, key[k]));
            }
        }
        row.push_back(to_string(weight));
        grid.push_back(row);
    }
    std::vector<std::size_t> widths(header.size(), 0);
    for (const auto& r : grid) {
        for (std::size_t k = 0; k < r.size(); ++k) widths[k] = std::max(widths[k], r[k].size());
    }
    std::string out = std::string("joint ") + (per_measurement ? "per-measurement" : "per-context") + "\n";
    out += "scenario " + s.name() + "\n";
    for (const auto& r : grid) out += join_row(r, widths) + "\n";
    return out;
}

JointDistribution parse_joint(std::string_view text, const Scenario& s) {
    auto lines = lex(text);
    if (lines.size() < 3) throw Error(ErrorKind::Input, "joint distribution needs mode, scenario and columns lines");
    expect_keyword(lines[0], "joint");
    JointDistribution w;
    if (lines[0].tokens.size() != 2) fail(lines[0].number, "expected 'joint per-measurement|per-context'");
    if (lines[0].tokens[1] == "per-measurement") w.mode = JointDistribution::Mode::PerMeasurement;
    else if (lines[0].tokens[1] == "per-context") w.mode = JointDistribution::Mode::PerContext;
    else fail(lines[0].number, "unknown mode '" + lines[0].tokens[1] + "'");
    expect_keyword(lines[1], "scenario");
    check_scenario_name(lines[1], s);
    expect_keyword(lines[2], "columns");
    auto cols = joint_columns(s, w.mode);
    std::vector<std::string> given(lines[2].tokens.begin() + 1, lines[2].tokens.end());
    cols.push_back("weight");
    if (given != cols) fail(lines[2].number, "columns must be the scenario's " +
                                                 std::string(w.mode == JointDistribution::Mode::PerMeasurement ? "measurements" : "contexts") +
                                                 " followed by 'weight'");
    for (std::size_t i = 3; i < lines.size(); ++i) {
        const Line& l = lines[i];
        expect_keyword(l, "point");
        if (l.tokens.size() != cols.size() + 1) fail(l.number, "point has the wrong number of entries");
        std::vector<std::size_t> key;
        std::size_t k = 1;
        for (const auto& p : s.parties()) {
            if (w.mode == JointDistribution::Mode::PerMeasurement) {
                for (std::size_t m = 0; m < p.measurements().size(); ++m, ++k) {
                    const auto& outs = p.measurements()[m].outcomes;
                    auto it = std::find(outs.begin(), outs.end(), l.tokens[k]);
                    if (it == outs.end()) fail(l.number, "unknown outcome '" + l.tokens[k] + "' for " + p.measurements()[m].label);
                    key.push_back(static_cast<std::size_t>(it - outs.begin()));
                }
            } else {
                for (std::size_t c = 0; c < p.contexts().size(); ++c, ++k) {
                    std::size_t t = 0;
                    while (t < p.tuple_count(c) && p.tuple_label(c, t) != l.tokens[k]) ++t;
                    if (t == p.tuple_count(c)) fail(l.number, "unknown outcome tuple '" + l.tokens[k] + "' for " + p.context_label(c));
                    key.push_back(t);
                }
            }
        }
        Rational weight = rational_at(l, k, "weight");
        if (w.support.count(key)) fail(l.number, "repeated support point");
        w.support[key] = weight;
    }
    try {
        w.validate(s);
    } catch (const Error& e) {
        throw Error(ErrorKind::Input, e.what());
    }
    return w;
}

namespace {

std::string real_text(double x) {
    if (x == 0) return "0";
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

double real_at(const Line& l, std::size_t k) {
    const std::string& t = l.tokens[k];
    double x = 0;
    const char* first = t.data();
    if (!t.empty() && t[0] == '+') ++first;
    auto res = std::from_chars(first, t.data() + t.size(), x);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size() || !std::isfinite(x)) {
        fail(l.number, "malformed number '" + t + "'");
    }
    return x;
}

void append_matrix(std::string& out, const CMatrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        out += " ";
        for (Eigen::Index j = 0; j < m.cols(); ++j) out += " " + real_text(m(i, j).real()) + " " + real_text(m(i, j).imag());
        out += "\n";
    }
}

CMatrix read_matrix(const std::vector<Line>& lines, std::size_t& i, std::size_t d, const std::string& what) {
    CMatrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t r = 0; r < d; ++r, ++i) {
        if (i >= lines.size()) throw Error(ErrorKind::Input, what + " has too few rows");
        const Line& l = lines[i];
        if (l.tokens.size() != 2 * d) fail(l.number, what + " row needs " + std::to_string(2 * d) + " numbers (real and imaginary parts)");
        for (std::size_t c = 0; c < d; ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = {real_at(l, 2 * c), real_at(l, 2 * c + 1)};
        }
    }
    return m;
}

}  // namespace

std::string serialize_quantum_model(const QuantumModel& m, const Scenario& s) {
    std::string out = "quantum-model\nscenario " + s.name() + "\ndims";
    for (auto d : m.dims) out += " " + std::to_string(d);
    out += "\nstate\n";
    append_matrix(out, m.state);
    for (std::size_t q = 0; q < m.projectors.size() && q < s.party_count(); ++q) {
        const Party& p = s.party(q);
        for (std::size_t k = 0; k < m.projectors[q].size(); ++k) {
            for (std::size_t o = 0; o < m.projectors[q][k].size(); ++o) {
                out += "projector " + p.measurements()[k].label + " " + p.measurements()[k].outcomes[o] + "\n";
                append_matrix(out, m.projectors[q][k][o]);
            }
        }
    }
    return out;
}

QuantumModel parse_quantum_model(std::string_view text, const Scenario& s) {
    auto lines = lex(text);
    if (lines.size() < 4) throw Error(ErrorKind::Input, "quantum model needs header, scenario, dims and state");
    expect_keyword(lines[0], "quantum-model");
    expect_keyword(lines[1], "scenario");
    check_scenario_name(lines[1], s);
    expect_keyword(lines[2], "dims");
    QuantumModel m;
    if (lines[2].tokens.size() != s.party_count() + 1) fail(lines[2].number, "one dimension per party is required");
    std::size_t total = 1;
    for (std::size_t q = 0; q < s.party_count(); ++q) {
        std::size_t d = count_at(lines[2], q + 1);
        if (d == 0 || d > 64) fail(lines[2].number, "dimensions must be between 1 and 64");
        m.dims.push_back(d);
        total *= d;
    }
    expect_keyword(lines[3], "state");
    std::size_t i = 4;
    m.state = read_matrix(lines, i, total, "state");
    m.projectors.resize(s.party_count());
    std::vector<std::vector<std::vector<bool>>> seen(s.party_count());
    for (std::size_t q = 0; q < s.party_count(); ++q) {
        const Party& p = s.party(q);
        m.projectors[q].resize(p.measurements().size());
        seen[q].resize(p.measurements().size());
        for (std::size_t k = 0; k < p.measurements().size(); ++k) {
            m.projectors[q][k].resize(p.outcome_count(k));
            seen[q][k].assign(p.outcome_count(k), false);
        }
    }
    while (i < lines.size()) {
        const Line& l = lines[i];
        expect_keyword(l, "projector");
        if (l.tokens.size() != 3) fail(l.number, "expected 'projector MEASUREMENT OUTCOME'");
        std::size_t q = 0, k = 0;
        bool found = false;
        for (; q < s.party_count() && !found; ++q) {
            const auto& ms = s.party(q).measurements();
            for (k = 0; k < ms.size(); ++k) {
                if (ms[k].label == l.tokens[1]) {
                    found = true;
                    break;
                }
            }
        }
        if (!found) fail(l.number, "unknown measurement '" + l.tokens[1] + "'");
        --q;
        const auto& outs = s.party(q).measurements()[k].outcomes;
        auto it = std::find(outs.begin(), outs.end(), l.tokens[2]);
        if (it == outs.end()) fail(l.number, "unknown outcome '" + l.tokens[2] + "' of " + l.tokens[1]);
        const auto o = static_cast<std::size_t>(it - outs.begin());
        if (seen[q][k][o]) fail(l.number, "projector given twice");
        seen[q][k][o] = true;
        ++i;
        m.projectors[q][k][o] = read_matrix(lines, i, m.dims[q], "projector " + l.tokens[1] + " " + l.tokens[2]);
    }
    for (std::size_t q = 0; q < s.party_count(); ++q) {
        for (std::size_t k = 0; k < seen[q].size(); ++k) {
            for (std::size_t o = 0; o < seen[q][k].size(); ++o) {
                if (!seen[q][k][o]) {
                    throw Error(ErrorKind::Input, "missing projector " + s.party(q).measurements()[k].label + " " +
                                                      s.party(q).measurements()[k].outcomes[o]);
                }
            }
        }
    }
    return m;
}

std::string serialize_vertex_cache(const VertexCache& c) {
    std::string out = "vertex-cache " + c.scenario_hash + "\nclasses";
    for (const auto& k : c.classes) out += " " + k;
    out += "\ndimension " + std::to_string(c.vertices.empty() ? 0 : c.vertices.front().size()) + "\n";
    for (const auto& v : c.vertices) {
        out += "vertex";
        for (const auto& q : v) out += " " + to_string(q);
        out += "\n";
    }
    return out;
}

VertexCache parse_vertex_cache(std::string_view text) {
    auto lines = lex(text);
    if (lines.size() < 3) throw Error(ErrorKind::Input, "vertex cache needs header, classes and dimension lines");
    VertexCache c;
    expect_keyword(lines[0], "vertex-cache");
    if (lines[0].tokens.size() != 2) fail(lines[0].number, "expected 'vertex-cache HASH'");
    c.scenario_hash = lines[0].tokens[1];
    expect_keyword(lines[1], "classes");
    c.classes.assign(lines[1].tokens.begin() + 1, lines[1].tokens.end());
    expect_keyword(lines[2], "dimension");
    std::size_t d = count_at(lines[2], 1);
    for (std::size_t i = 3; i < lines.size(); ++i) {
        const Line& l = lines[i];
        expect_keyword(l, "vertex");
        if (l.tokens.size() != d + 1) fail(l.number, "vertex has the wrong number of coordinates");
        RVector v(d);
        for (std::size_t k = 0; k < d; ++k) v[k] = rational_at(l, k + 1);
        c.vertices.push_back(std::move(v));
    }
    return c;
}

}  // namespace extbell
