// Copyright (c) extbell contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace extbell {

// GMP keeps mpq_class canonical (reduced, positive denominator) after every
// arithmetic operation; only string construction needs an explicit canonicalize.
using Integer = mpz_class;
using Rational = mpq_class;
using RVector = std::vector<Rational>;
using IVector = std::vector<Integer>;

/// Parses "n", "-n" or "n/d" exactly. Decimal notation is rejected.
Rational parse_rational(std::string_view text);

/// True when `text` is a valid exact rational literal.
bool is_rational_literal(std::string_view text);

std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

Rational dot(std::span<const Rational> a, std::span<const Rational> b);

/// Multiplies `v` by the positive factor that makes it a primitive integer
/// vector (coprime entries). Returns the factor used. Zero vectors are untouched.
Rational make_primitive(RVector& v);

/// Same as make_primitive but also scales a trailing scalar with the vector
/// (used for constraints a.x <= b), keeping (a, b) jointly primitive.
Rational make_primitive(RVector& coeffs, Rational& rhs);

IVector to_integers(std::span<const Rational> v);
RVector to_rationals(std::span<const Integer> v);

/// Divides an integer vector by the gcd of its entries.
void make_primitive(IVector& v);

bool is_zero(std::span<const Rational> v);
int lex_compare(std::span<const Rational> a, std::span<const Rational> b);

}  // namespace extbell
