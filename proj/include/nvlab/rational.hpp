#pragma once
// Exact rational arithmetic for the exponent-pair calculus.
//
// Backed by boost::multiprecision::cpp_rational: always stored in lowest
// terms with positive denominator, arbitrary precision, so chains of
// A/B-process applications never round.

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

#include "nvlab/errors.hpp"

namespace nvlab {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Parse "52/243", "-3/7", "2". Whitespace is not tolerated; the CLI trims
// before calling. Throws UsageError on anything else (including "/3", "3/",
// zero denominators).
Rational parse_rational(std::string_view s);

// "52/243", or just "2" when the denominator is 1.
std::string to_fraction_string(const Rational& r);

// Fixed-point decimal with `places` digits after the point, round-half-up
// away from zero. Used for budget/proportion display next to the exact form.
std::string to_decimal_string(const Rational& r, int places = 6);

double to_double(const Rational& r);

} // namespace nvlab
