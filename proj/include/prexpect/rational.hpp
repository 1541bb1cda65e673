#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace prexpect {

/// Exact rational number. GMP keeps every value in lowest terms with a
/// positive denominator.
using Rational = mpq_class;
using Integer = mpz_class;

std::string to_string(const Rational& q);

/// Parses "3", "-7/2" or "0.25" exactly.
Rational parse_rational(const std::string& text);

/// Exact conversion; every finite double is a dyadic rational.
Rational from_double(double d);

/// Round-to-nearest conversion (ties to even), unlike mpq_get_d which
/// truncates toward zero.
double to_double(const Rational& q);

/// Best rational approximation of `d` with denominator at most `max_den`
/// (continued-fraction convergents and semiconvergents).
Rational snap(double d, std::int64_t max_den);

Integer floor(const Rational& q);
Integer ceil(const Rational& q);

}  // namespace prexpect
