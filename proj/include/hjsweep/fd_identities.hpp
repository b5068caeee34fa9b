#pragma once

// Binomial-sum identities underpinning the closed-form coefficient families.
// Each function evaluates the left-hand side exactly so callers can compare
// against the stated right-hand side.

#include "hjsweep/rational.hpp"

#include <cstdint>

namespace hjsweep::identities {

/// sum_{i=0}^{n} (i + m)^k C(n, i) (-1)^i. Vanishes for n >= 2, 1 <= k <= n - 1.
Rational binomial_power_sum(std::int64_t n, std::int64_t m, std::int64_t k);

/// sum_{i=0}^{p} C(-r, i) C(r + p, p - i). Equals 1.
Rational fractional_sum(const Rational& r, std::int64_t p);

/// sum_{i=0}^{p} (r + i)^k C(-r, i) C(r + p, p - i). Vanishes for 1 <= k <= p.
Rational fractional_zero_sum(const Rational& r, std::int64_t p, std::int64_t k);

/// G_k(lambda) = sum_{i=0}^{p} (r + i)^k C(-r + lambda, i) C(r + p - lambda, p - i).
/// Equals lambda^k for 0 <= k <= p.
Rational g_polynomial(const Rational& r, std::int64_t p, std::int64_t k, const Rational& lambda);

/// H_i(lambda) = C(-r + lambda, i) C(r + p - lambda, p - i); the Lagrange-type
/// basis that is 1 at lambda = r + i and 0 at the other r + j, 0 <= j <= p.
Rational h_polynomial(const Rational& r, std::int64_t p, std::int64_t i, const Rational& lambda);

}  // namespace hjsweep::identities
