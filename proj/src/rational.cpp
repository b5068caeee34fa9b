#include "hjsweep/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace hjsweep {

Integer numerator(const Rational& r) { return boost::multiprecision::numerator(r); }

Integer denominator(const Rational& r) { return boost::multiprecision::denominator(r); }

std::string to_string(const Rational& r) {
    const Integer den = denominator(r);
    if (den == 1) return numerator(r).str();
    return numerator(r).str() + "/" + den.str();
}

std::string to_fraction_string(const Rational& r) {
    return numerator(r).str() + "/" + denominator(r).str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

namespace {

Integer parse_integer(std::string_view text, std::string_view whole) {
    std::size_t pos = 0;
    bool negative = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
        negative = text[pos] == '-';
        ++pos;
    }
    if (pos == text.size()) throw std::invalid_argument("malformed rational: '" + std::string(whole) + "'");
    Integer value = 0;
    for (; pos < text.size(); ++pos) {
        const char c = text[pos];
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw std::invalid_argument("malformed rational: '" + std::string(whole) + "'");
        value = value * 10 + (c - '0');
    }
    return negative ? Integer(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.empty()) throw std::invalid_argument("empty rational");

    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        const Integer num = parse_integer(text.substr(0, slash), text);
        const Integer den = parse_integer(text.substr(slash + 1), text);
        if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
        return Rational(num, den);
    }
    if (const auto dot = text.find('.'); dot != std::string_view::npos) {
        std::string digits(text.substr(0, dot));
        const std::string_view frac = text.substr(dot + 1);
        if (frac.empty() || frac.front() == '+' || frac.front() == '-')
            throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
        digits += frac;
        if (digits.empty() || digits == "-" || digits == "+") digits += "0";
        Integer scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
        return Rational(parse_integer(digits, text), scale);
    }
    return Rational(parse_integer(text, text));
}

Rational factorial(std::int64_t n) {
    if (n < 0) throw std::invalid_argument("factorial of a negative number");
    Integer acc = 1;
    for (std::int64_t i = 2; i <= n; ++i) acc *= i;
    return Rational(acc);
}

Rational binomial(const Rational& r, std::int64_t k) {
    if (k < 0) throw std::invalid_argument("binomial with negative lower argument");
    Rational acc = 1;
    for (std::int64_t i = 0; i < k; ++i) acc *= (r - i);
    return acc / factorial(k);
}

Rational power(const Rational& r, std::int64_t e) {
    if (e < 0) throw std::invalid_argument("negative exponent");
    Rational acc = 1;
    for (std::int64_t i = 0; i < e; ++i) acc *= r;
    return acc;
}

}  // namespace hjsweep
