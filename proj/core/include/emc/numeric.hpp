#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace emc {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Accepts "a/b", "a", and decimal notation "x.y" (converted exactly).
// Throws FormatError on anything else or on a zero denominator.
Rational parse_rational(const std::string& s);

// Canonical form: integers render bare ("0", "3"), everything else as "a/b"
// with positive denominator. parse_rational round-trips this exactly.
std::string format_rational(const Rational& r);

// Exact decimal rendering with `digits` significant digits, %g-style:
// fixed notation for exponents in [-4, digits), scientific otherwise.
// Rounding is half-away-from-zero on the exact value, so the output is
// deterministic and independent of floating point.
std::string decimal_string(const Rational& r, int digits = 12);

BigInt binomial(int n, int k);

// base^e by squaring on numerator/denominator.
Rational rational_pow(const Rational& base, unsigned e);

double to_double(const Rational& r);

}  // namespace emc
