#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace knapcrack {

using Integer = mpz_class;
// mpq_class keeps every value canonical (lowest terms, positive denominator).
using Rational = mpq_class;

using IntVector = std::vector<Integer>;
using RatVector = std::vector<Rational>;

Integer dot(std::span<const Integer> x, std::span<const Integer> y);
Rational dot(std::span<const Rational> x, std::span<const Rational> y);
Rational dot(std::span<const Integer> x, std::span<const Rational> y);

Integer squared_norm(std::span<const Integer> x);
Integer sum(std::span<const Integer> x);
Integer max_element(std::span<const Integer> x);

bool is_binary(std::span<const Integer> x);
bool is_zero(std::span<const Integer> x);

// floor(q) and ceil(q) for exact rationals.
Integer floor(const Rational& q);
Integer ceil(const Rational& q);

IntVector make_int_vector(std::initializer_list<long> values);

std::string to_string(const Integer& z);
std::string to_string(const Rational& q);
// "p/q" or "p"; throws Error(ParseError) on malformed text.
Rational parse_rational(const std::string& text);
Integer parse_integer(const std::string& text);

// Comma separated "(1, 0, -1)".
std::string format_vector(std::span<const Integer> x);

}  // namespace knapcrack
