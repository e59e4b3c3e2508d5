// Copyright (c) extbell contributors.
// SPDX-License-Identifier: Apache-2.0
#include "extbell/rational.hpp"

#include <algorithm>
#include <cctype>

#include "extbell/error.hpp"

namespace extbell {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

}  // namespace

bool is_rational_literal(std::string_view text) {
    if (!text.empty() && (text.front() == '-' || text.front() == '+')) text.remove_prefix(1);
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return all_digits(text);
    auto num = text.substr(0, slash);
    auto den = text.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) return false;
    // a zero denominator is never a literal
    return den.find_first_not_of('0') != std::string_view::npos;
}

Rational parse_rational(std::string_view text) {
    if (!is_rational_literal(text)) {
        throw Error(ErrorKind::Input, "malformed rational '" + std::string(text) + "'");
    }
    std::string s(text);
    if (s.front() == '+') s.erase(0, 1);
    Rational q(s, 10);
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) { return q.get_str(10); }
std::string to_string(const Integer& z) { return z.get_str(10); }

Rational dot(std::span<const Rational> a, std::span<const Rational> b) {
    Rational sum = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (sgn(a[i]) != 0 && sgn(b[i]) != 0) sum += a[i] * b[i];
    }
    return sum;
}

namespace {

// Positive factor turning (v, extra...) into a primitive integer vector.
Rational primitive_factor(std::span<const Rational> v, const Rational* extra) {
    Integer l = 1;
    Integer g = 0;
    auto visit_den = [&](const Rational& q) {
        if (sgn(q) != 0) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
    };
    for (const auto& q : v) visit_den(q);
    if (extra) visit_den(*extra);
    auto visit_num = [&](const Rational& q) {
        if (sgn(q) == 0) return;
        Integer n = q.get_num() * (l / q.get_den());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
    };
    for (const auto& q : v) visit_num(q);
    if (extra) visit_num(*extra);
    if (g == 0) return Rational(1);
    Rational f(l, g);
    f.canonicalize();
    return f;
}

}  // namespace

Rational make_primitive(RVector& v) {
    Rational f = primitive_factor(v, nullptr);
    if (f != 1) {
        for (auto& q : v) q *= f;
    }
    return f;
}

Rational make_primitive(RVector& coeffs, Rational& rhs) {
    Rational f = primitive_factor(coeffs, &rhs);
    if (f != 1) {
        for (auto& q : coeffs) q *= f;
        rhs *= f;
    }
    return f;
}

IVector to_integers(std::span<const Rational> v) {
    IVector out;
    out.reserve(v.size());
    for (const auto& q : v) {
        if (q.get_den() != 1) throw Error(ErrorKind::Validation, "to_integers: non-integral entry " + to_string(q));
        out.push_back(q.get_num());
    }
    return out;
}

RVector to_rationals(std::span<const Integer> v) {
    RVector out;
    out.reserve(v.size());
    for (const auto& z : v) out.emplace_back(z);
    return out;
}

void make_primitive(IVector& v) {
    Integer g = 0;
    for (const auto& z : v) {
        if (sgn(z) != 0) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), z.get_mpz_t());
        if (g == 1) return;
    }
    if (g == 0 || g == 1) return;
    for (auto& z : v) mpz_divexact(z.get_mpz_t(), z.get_mpz_t(), g.get_mpz_t());
}

bool is_zero(std::span<const Rational> v) {
    for (const auto& q : v) {
        if (sgn(q) != 0) return false;
    }
    return true;
}

int lex_compare(std::span<const Rational> a, std::span<const Rational> b) {
    std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        int c = cmp(a[i], b[i]);
        if (c != 0) return c < 0 ? -1 : 1;
    }
    if (a.size() == b.size()) return 0;
    return a.size() < b.size() ? -1 : 1;
}

}  // namespace extbell
