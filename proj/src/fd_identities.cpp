#include "hjsweep/fd_identities.hpp"

namespace hjsweep::identities {

Rational binomial_power_sum(std::int64_t n, std::int64_t m, std::int64_t k) {
    Rational acc = 0;
    for (std::int64_t i = 0; i <= n; ++i) {
        const Rational term = power(Rational(i + m), k) * binomial(Rational(n), i);
        acc += (i % 2 == 0) ? term : Rational(-term);
    }
    return acc;
}

Rational fractional_sum(const Rational& r, std::int64_t p) { return fractional_zero_sum(r, p, 0); }

Rational fractional_zero_sum(const Rational& r, std::int64_t p, std::int64_t k) {
    return g_polynomial(r, p, k, Rational(0));
}

Rational g_polynomial(const Rational& r, std::int64_t p, std::int64_t k, const Rational& lambda) {
    Rational acc = 0;
    for (std::int64_t i = 0; i <= p; ++i) acc += power(r + i, k) * h_polynomial(r, p, i, lambda);
    return acc;
}

Rational h_polynomial(const Rational& r, std::int64_t p, std::int64_t i, const Rational& lambda) {
    return binomial(-r + lambda, i) * binomial(r + p - lambda, p - i);
}

}  // namespace hjsweep::identities
