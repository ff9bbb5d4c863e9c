#include "nvlab/rational.hpp"

#include <cctype>

namespace nvlab {

namespace {

bool parse_integer(std::string_view s, BigInt& out) {
    if (s.empty()) return false;
    std::size_t i = 0;
    bool neg = false;
    if (s[0] == '+' || s[0] == '-') {
        neg = (s[0] == '-');
        i = 1;
    }
    if (i == s.size()) return false;
    BigInt v = 0;
    for (; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
        v = v * 10 + (s[i] - '0');
    }
    out = neg ? -v : v;
    return true;
}

} // namespace

Rational parse_rational(std::string_view s) {
    const auto slash = s.find('/');
    BigInt num, den = 1;
    if (slash == std::string_view::npos) {
        if (!parse_integer(s, num))
            throw UsageError("not a rational: '" + std::string(s) + "'");
    } else {
        if (!parse_integer(s.substr(0, slash), num) ||
            !parse_integer(s.substr(slash + 1), den))
            throw UsageError("not a rational: '" + std::string(s) + "'");
        if (den == 0)
            throw UsageError("zero denominator: '" + std::string(s) + "'");
    }
    return Rational(num, den);
}

std::string to_fraction_string(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

std::string to_decimal_string(const Rational& r, int places) {
    // Scale to an integer of the right precision, round half away from zero.
    BigInt pow10 = 1;
    for (int i = 0; i < places; ++i) pow10 *= 10;
    BigInt num = numerator(r) * pow10 * 2;
    BigInt den = denominator(r);
    bool neg = num < 0;
    if (neg) num = -num;
    BigInt scaled = (num / den + 1) / 2; // floor(x+1/2) on the doubled value
    std::string digits = scaled.str();
    if (static_cast<int>(digits.size()) <= places)
        digits.insert(0, places + 1 - digits.size(), '0');
    digits.insert(digits.size() - places, ".");
    if (neg) digits.insert(0, "-");
    return digits;
}

double to_double(const Rational& r) {
    return r.convert_to<double>();
}

} // namespace nvlab
