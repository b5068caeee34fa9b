#include "hjsweep/fd_coeffs.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace hjsweep {

namespace {

void check_order(int k, const char* what) {
    if (k < 1 || k > kMaxStencilOrder)
        throw std::invalid_argument(std::string(what) + ": order must be in [1, " +
                                    std::to_string(kMaxStencilOrder) + "], got " + std::to_string(k));
}

Rational sign(std::int64_t e) { return (e % 2 == 0) ? Rational(1) : Rational(-1); }

Rational harmonic(int k) {
    Rational acc = 0;
    for (int i = 1; i <= k; ++i) acc += Rational(1, i);
    return acc;
}

// Offset 0 first, followed by the given nodes; weight at 0 is minus the rest.
Stencil with_derived_center(const std::vector<Rational>& nodes, const std::vector<Rational>& weights, int p,
                            int q) {
    Stencil s;
    s.derivative_order = p;
    s.accuracy_order = q;
    Rational sum = 0;
    for (const auto& w : weights) sum += w;
    s.offsets.reserve(nodes.size() + 1);
    s.weights.reserve(nodes.size() + 1);
    s.offsets.emplace_back(0);
    s.weights.push_back(-sum);
    s.offsets.insert(s.offsets.end(), nodes.begin(), nodes.end());
    s.weights.insert(s.weights.end(), weights.begin(), weights.end());
    return s;
}

std::vector<Rational> without(const std::vector<Rational>& values, std::size_t skip) {
    std::vector<Rational> rest;
    rest.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        if (i != skip) rest.push_back(values[i]);
    return rest;
}

}  // namespace

// Stencil -----------------------------------------------------------------

Rational Stencil::weight_at(const Rational& offset) const {
    Rational total = 0;
    for (std::size_t i = 0; i < offsets.size(); ++i)
        if (offsets[i] == offset) total += weights[i];
    return total;
}

bool Stencil::same_rule(const Stencil& other) const {
    auto as_map = [](const Stencil& s) {
        std::map<Rational, Rational> m;
        for (std::size_t i = 0; i < s.offsets.size(); ++i) m[s.offsets[i]] += s.weights[i];
        std::erase_if(m, [](const auto& kv) { return kv.second == 0; });
        return m;
    };
    return derivative_order == other.derivative_order && as_map(*this) == as_map(other);
}

// Node sets -----------------------------------------------------------------

std::vector<Rational> nodes_of(const NodeSpec& spec) {
    std::vector<Rational> nodes;
    if (const auto* ar = std::get_if<ArithmeticNodes>(&spec)) {
        if (ar->count < 1) throw std::invalid_argument("arithmetic nodes: count must be positive");
        if (ar->d == 0) throw std::invalid_argument("arithmetic nodes: step d must be nonzero");
        for (int i = 0; i < ar->count; ++i) {
            nodes.push_back(ar->a + ar->d * i);
            if (nodes.back() == 0)
                throw std::invalid_argument("arithmetic nodes: node " + std::to_string(i + 1) + " is zero");
        }
    } else {
        const auto& off = std::get<OffsetNodes>(spec);
        if (off.m < 1 || off.n < 1) throw std::invalid_argument("offset nodes: m and n must be positive");
        if (off.d == 0) throw std::invalid_argument("offset nodes: step d must be nonzero");
        for (int i = -off.m; i <= off.n; ++i)
            if (i != 0) nodes.push_back(off.d * i);
    }
    return nodes;
}

// Matrices ------------------------------------------------------------------

RationalMatrix::RationalMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, Rational(0)) {}

RationalMatrix RationalMatrix::identity(std::size_t size) {
    RationalMatrix m(size, size);
    for (std::size_t i = 0; i < size; ++i) m(i, i) = 1;
    return m;
}

RationalMatrix operator*(const RationalMatrix& lhs, const RationalMatrix& rhs) {
    if (lhs.cols() != rhs.rows()) throw std::invalid_argument("matrix product: shape mismatch");
    RationalMatrix out(lhs.rows(), rhs.cols());
    for (std::size_t i = 0; i < lhs.rows(); ++i)
        for (std::size_t k = 0; k < lhs.cols(); ++k) {
            if (lhs(i, k) == 0) continue;
            for (std::size_t j = 0; j < rhs.cols(); ++j) out(i, j) += lhs(i, k) * rhs(k, j);
        }
    return out;
}

ClosedFormMismatch::ClosedFormMismatch(std::size_t row, std::size_t col, Rational value)
    : std::runtime_error("closed-form inverse mismatch: product entry (" + std::to_string(row + 1) + ", " +
                         std::to_string(col + 1) + ") = " + to_string(value)),
      row_(row),
      col_(col),
      value_(std::move(value)) {}

// Closed forms ----------------------------------------------------------------

Stencil backward_weights(int k) {
    check_order(k, "backward_weights");
    Stencil s;
    s.derivative_order = 1;
    s.accuracy_order = k;
    s.offsets.emplace_back(0);
    s.weights.push_back(harmonic(k));
    for (int i = 1; i <= k; ++i) {
        s.offsets.emplace_back(-i);
        s.weights.push_back(sign(i) * binomial(Rational(k), i) / i);
    }
    return s;
}

Stencil forward_weights(int k) {
    check_order(k, "forward_weights");
    Stencil s;
    s.derivative_order = 1;
    s.accuracy_order = k;
    s.offsets.emplace_back(0);
    s.weights.push_back(-harmonic(k));
    for (int i = 1; i <= k; ++i) {
        s.offsets.emplace_back(i);
        s.weights.push_back(sign(i - 1) * binomial(Rational(k), i) / i);
    }
    return s;
}

Stencil centered_weights(int m, int n) {
    if (m < 1 || n < 1) throw std::invalid_argument("centered_weights: m and n must be positive");
    check_order(m + n, "centered_weights");
    const Rational denom_binom = binomial(Rational(n + m), m);
    Stencil s;
    s.derivative_order = 1;
    s.accuracy_order = n + m;
    Rational sum = 0;
    std::size_t center = 0;
    for (int i = -m; i <= n; ++i) {
        s.offsets.emplace_back(i);
        if (i == 0) {
            center = s.weights.size();
            s.weights.emplace_back(0);
            continue;
        }
        Rational c = sign(i - 1) * binomial(Rational(n + m), i + m) / (denom_binom * i);
        sum += c;
        s.weights.push_back(std::move(c));
    }
    s.weights[center] = -sum;
    return s;
}

Stencil arithmetic_weights(const ArithmeticNodes& spec) {
    const auto nodes = nodes_of(spec);
    const int k = spec.count;
    check_order(k, "arithmetic_weights");
    const Rational lower = -nodes.front() / spec.d;
    const Rational upper = nodes.back() / spec.d;
    std::vector<Rational> weights;
    weights.reserve(nodes.size());
    for (int i = 1; i <= k; ++i)
        weights.push_back(binomial(lower, i - 1) * binomial(upper, k - i) / nodes[i - 1]);
    return with_derived_center(nodes, weights, 1, k);
}

Rational elementary_symmetric(std::span<const Rational> values, std::size_t k) {
    if (k > values.size())
        throw std::invalid_argument("elementary_symmetric: k = " + std::to_string(k) + " exceeds set size " +
                                    std::to_string(values.size()));
    // e[j] holds sigma_j of the prefix processed so far.
    std::vector<Rational> e(k + 1, Rational(0));
    e[0] = 1;
    for (const auto& v : values)
        for (std::size_t j = k; j >= 1; --j) e[j] += v * e[j - 1];
    return e[k];
}

RationalMatrix vandermonde_matrix(const NodeSpec& spec) {
    const auto nodes = nodes_of(spec);
    const std::size_t size = nodes.size();
    RationalMatrix a(size, size);
    for (std::size_t j = 0; j < size; ++j) {
        Rational p = 1;
        for (std::size_t i = 0; i < size; ++i) {
            p *= nodes[j];
            a(i, j) = p;
        }
    }
    return a;
}

namespace {

RationalMatrix arithmetic_inverse(const ArithmeticNodes& spec, const std::vector<Rational>& nodes) {
    const auto n = static_cast<std::int64_t>(nodes.size());
    const Rational d_pow = power(spec.d, n - 1);
    RationalMatrix b(nodes.size(), nodes.size());
    for (std::int64_t i = 1; i <= n; ++i) {
        const auto rest = without(nodes, static_cast<std::size_t>(i - 1));
        const Rational scale = nodes[i - 1] * d_pow * factorial(i - 1) * factorial(n - i);
        for (std::int64_t j = 1; j <= n; ++j)
            b(i - 1, j - 1) = sign(i + j) * elementary_symmetric(rest, static_cast<std::size_t>(n - j)) / scale;
    }
    return b;
}

RationalMatrix offset_inverse(const OffsetNodes& spec, const std::vector<Rational>& nodes,
                              InverseNormalization norm) {
    const std::int64_t m = spec.m;
    const std::int64_t n = spec.n;
    const std::int64_t total = m + n;
    auto d_scale = [&](std::int64_t j) {
        return norm == InverseNormalization::corrected ? power(spec.d, total) : power(spec.d, j);
    };
    RationalMatrix b(nodes.size(), nodes.size());
    // Rows 1..m: nodes (i - m - 1) d.
    for (std::int64_t i = 1; i <= m; ++i) {
        const auto rest = without(nodes, static_cast<std::size_t>(i - 1));
        const Rational fact = factorial(i - 1) * factorial(total - i + 1);
        for (std::int64_t j = 1; j <= total; ++j)
            b(i - 1, j - 1) = sign(i + j + 1) * elementary_symmetric(rest, static_cast<std::size_t>(total - j)) /
                              (d_scale(j) * fact);
    }
    // Rows m+1..m+n: nodes i d.
    for (std::int64_t i = 1; i <= n; ++i) {
        const auto row = static_cast<std::size_t>(m + i - 1);
        const auto rest = without(nodes, row);
        const Rational fact = factorial(m + i) * factorial(n - i);
        for (std::int64_t j = 1; j <= total; ++j)
            b(row, j - 1) = sign(m + i + j) * elementary_symmetric(rest, static_cast<std::size_t>(total - j)) /
                            (d_scale(j) * fact);
    }
    return b;
}

void certify_inverse(const RationalMatrix& a, const RationalMatrix& b) {
    const auto id = RationalMatrix::identity(a.rows());
    for (const auto& product : {a * b, b * a}) {
        for (std::size_t i = 0; i < product.rows(); ++i)
            for (std::size_t j = 0; j < product.cols(); ++j)
                if (product(i, j) != id(i, j)) throw ClosedFormMismatch(i, j, product(i, j));
    }
}

}  // namespace

RationalMatrix closed_form_inverse(const NodeSpec& spec, InverseNormalization norm) {
    const auto nodes = nodes_of(spec);
    RationalMatrix b = std::holds_alternative<ArithmeticNodes>(spec)
                           ? arithmetic_inverse(std::get<ArithmeticNodes>(spec), nodes)
                           : offset_inverse(std::get<OffsetNodes>(spec), nodes, norm);
    certify_inverse(vandermonde_matrix(spec), b);
    return b;
}

Stencil derivative_weights(const NodeSpec& spec, int p) {
    const auto nodes = nodes_of(spec);
    const int count = static_cast<int>(nodes.size());
    if (p < 1 || p > count)
        throw std::invalid_argument("derivative_weights: p = " + std::to_string(p) + " outside [1, " +
                                    std::to_string(count) + "]");
    const auto b = closed_form_inverse(spec);
    const Rational scale = factorial(p);
    std::vector<Rational> weights;
    weights.reserve(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) weights.push_back(scale * b(i, static_cast<std::size_t>(p - 1)));
    return with_derived_center(nodes, weights, p, count - p + 1);
}

std::vector<Rational> printed_last_column(const NodeSpec& spec) {
    const auto nodes = nodes_of(spec);
    std::vector<Rational> c;
    if (const auto* ar = std::get_if<ArithmeticNodes>(&spec)) {
        const std::int64_t n = ar->count;
        for (std::int64_t i = 1; i <= n; ++i)
            c.push_back(sign(n + i) / nodes[i - 1] / (power(ar->d, n - 1) * factorial(i - 1) * factorial(n - i)));
    } else {
        const auto& off = std::get<OffsetNodes>(spec);
        const std::int64_t m = off.m;
        const std::int64_t n = off.n;
        for (std::int64_t i = -m; i <= n; ++i) {
            if (i == 0) continue;
            c.push_back(sign(n + i) / (power(off.d, n + m) * factorial(m + i) * factorial(n - i)));
        }
    }
    return c;
}

std::vector<Rational> printed_second_last_column(const NodeSpec& spec) {
    const auto nodes = nodes_of(spec);
    if (nodes.size() < 2) throw std::invalid_argument("printed_second_last_column: needs at least two nodes");
    std::vector<Rational> c;
    if (const auto* ar = std::get_if<ArithmeticNodes>(&spec)) {
        const std::int64_t n = ar->count;
        const Rational half_sum = Rational(n, 2) * (nodes.front() + nodes.back());
        for (std::int64_t i = 1; i <= n; ++i) {
            const Rational& ai = nodes[i - 1];
            c.push_back(sign(n + i - 1) / ai * (half_sum - ai) /
                        (power(ar->d, n - 1) * factorial(i - 1) * factorial(n - i)));
        }
    } else {
        const auto& off = std::get<OffsetNodes>(spec);
        const std::int64_t m = off.m;
        const std::int64_t n = off.n;
        const Rational shift = Rational(n * n - m * m, 2);
        for (std::int64_t i = -m; i <= n; ++i) {
            if (i == 0) continue;
            c.push_back(sign(n + i - 1) * (shift - i) /
                        (power(off.d, n + m - 2) * factorial(m + i) * factorial(n - i)));
        }
    }
    return c;
}

// Oracle --------------------------------------------------------------------

Stencil oracle_weights(std::span<const Rational> nodes_in, int p) {
    std::vector<Rational> nodes;
    std::set<Rational> seen;
    for (const auto& x : nodes_in) {
        if (!seen.insert(x).second)
            throw std::invalid_argument("oracle_weights: duplicate node " + to_string(x));
        if (x != 0) nodes.push_back(x);
    }
    const std::size_t count = nodes.size();
    if (p < 1 || static_cast<std::size_t>(p) > count)
        throw std::invalid_argument("oracle_weights: p = " + std::to_string(p) + " outside [1, " +
                                    std::to_string(count) + "]");

    // Augmented system [M | rhs], M_rc = node_c^(r+1).
    RationalMatrix sys(count, count + 1);
    for (std::size_t c = 0; c < count; ++c) {
        Rational pw = 1;
        for (std::size_t r = 0; r < count; ++r) {
            pw *= nodes[c];
            sys(r, c) = pw;
        }
    }
    sys(static_cast<std::size_t>(p - 1), count) = factorial(p);

    for (std::size_t col = 0; col < count; ++col) {
        std::size_t pivot = col;
        while (pivot < count && sys(pivot, col) == 0) ++pivot;
        if (pivot == count) throw std::invalid_argument("oracle_weights: singular moment system");
        if (pivot != col)
            for (std::size_t j = 0; j <= count; ++j) std::swap(sys(pivot, j), sys(col, j));
        const Rational inv = 1 / sys(col, col);
        for (std::size_t j = col; j <= count; ++j) sys(col, j) *= inv;
        for (std::size_t r = 0; r < count; ++r) {
            if (r == col || sys(r, col) == 0) continue;
            const Rational factor = sys(r, col);
            for (std::size_t j = col; j <= count; ++j) sys(r, j) -= factor * sys(col, j);
        }
    }
    std::vector<Rational> weights;
    weights.reserve(count);
    for (std::size_t r = 0; r < count; ++r) weights.push_back(sys(r, count));
    return with_derived_center(nodes, weights, p, static_cast<int>(count) - p + 1);
}

bool satisfies_moment_conditions(const Stencil& s) {
    if (s.offsets.size() != s.weights.size()) return false;
    const int top = s.derivative_order + s.accuracy_order - 1;
    const Rational target = factorial(s.derivative_order);
    for (int m = 0; m <= top; ++m) {
        Rational moment = 0;
        for (std::size_t i = 0; i < s.offsets.size(); ++i) moment += s.weights[i] * power(s.offsets[i], m);
        if (moment != (m == s.derivative_order ? target : Rational(0))) return false;
    }
    return true;
}

// Application -----------------------------------------------------------------

double apply_stencil(const Stencil& s, const std::map<Rational, double>& samples, double h) {
    if (!(h > 0)) throw std::invalid_argument("apply_stencil: h must be positive");
    double acc = 0.0;
    for (std::size_t i = 0; i < s.offsets.size(); ++i) {
        const auto it = samples.find(s.offsets[i]);
        if (it == samples.end())
            throw std::invalid_argument("apply_stencil: missing sample at offset " + to_string(s.offsets[i]));
        acc += to_double(s.weights[i]) * it->second;
    }
    return acc / std::pow(h, s.derivative_order);
}

std::vector<double> weights_as_double(const Stencil& s) {
    std::vector<double> out;
    out.reserve(s.weights.size());
    for (const auto& w : s.weights) out.push_back(to_double(w));
    return out;
}

}  // namespace hjsweep
