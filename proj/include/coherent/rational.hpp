#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace coherent {

/// Exact rational scalar. GMP keeps every result in lowest terms with a
/// positive denominator.
using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "p/q" or "p" (optional leading '-'). Decimals, exponents, blanks
/// and zero denominators are rejected with InvalidParameter.
Rational parse_rational(std::string_view text);

/// Canonical "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& value);

/// Decimal rendering rounded half-up to `digits` fractional digits, trailing
/// zeros trimmed but at least one fractional digit kept ("0.4", "1.0").
std::string to_decimal(const Rational& value, int digits = 12);

/// num/den in lowest terms. den must be non-zero.
Rational ratio(long num, long den);

inline Rational half() { return Rational(1, 2); }

inline Rational abs(const Rational& value) { return value < 0 ? Rational(-value) : value; }

inline const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }
inline const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }

/// Smallest integer not below `value`.
Integer ceil(const Rational& value);

}  // namespace coherent
