#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace hjsweep {

/// Exact rational number. Always kept in canonical form (positive
/// denominator, reduced by the gcd), so equality is structural.
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

Integer numerator(const Rational& r);
Integer denominator(const Rational& r);

/// "p/q" with q > 1, or "p" for integers.
std::string to_string(const Rational& r);

/// Always "p/q", even when q == 1.
std::string to_fraction_string(const Rational& r);

double to_double(const Rational& r);

/// Parses "p", "p/q" or a plain decimal such as "-0.25". Throws
/// std::invalid_argument on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

Rational factorial(std::int64_t n);

/// Binomial coefficient with a rational top argument, defined by the falling
/// factorial r (r - 1) ... (r - k + 1) / k!. binomial(r, 0) == 1.
Rational binomial(const Rational& r, std::int64_t k);

/// r^e for a non-negative integer exponent, with 0^0 == 1.
Rational power(const Rational& r, std::int64_t e);

}  // namespace hjsweep
