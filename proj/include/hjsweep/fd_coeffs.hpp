#pragma once

// Exact finite-difference coefficient families.
//
// A stencil approximates f^(p)(x) by h^-p * sum_i w_i f(x + o_i h). Every
// generator below returns weights in exact rational arithmetic; floating point
// only enters in apply_stencil. The weight at offset 0 is always derived as
// minus the sum of the remaining weights, so sum_i w_i == 0 by construction.

#include "hjsweep/rational.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace hjsweep {

struct Stencil {
    std::vector<Rational> offsets;
    std::vector<Rational> weights;
    int derivative_order = 1;
    int accuracy_order = 1;

    /// Weight attached to `offset`, or 0 when the offset is not a node.
    Rational weight_at(const Rational& offset) const;

    /// Stencils are equal when they assign the same weight to every offset,
    /// regardless of node ordering; zero-weight nodes are ignored.
    bool same_rule(const Stencil& other) const;
};

/// Largest order accepted by the closed-form generators. Arithmetic is exact
/// at any size; the cap only guards against absurd requests.
inline constexpr int kMaxStencilOrder = 64;

// Node sets ---------------------------------------------------------------

/// Nodes a, a + d, ..., a + (count - 1) d.
struct ArithmeticNodes {
    Rational a;
    Rational d;
    int count = 1;
};

/// Nodes -m d, ..., -d, d, ..., n d (zero excluded).
struct OffsetNodes {
    int m = 1;
    int n = 1;
    Rational d = 1;
};

using NodeSpec = std::variant<ArithmeticNodes, OffsetNodes>;

/// Node list in the row order used by vandermonde_matrix and
/// closed_form_inverse. Validates the node spec (throws std::invalid_argument).
std::vector<Rational> nodes_of(const NodeSpec& spec);

class RationalMatrix {
public:
    RationalMatrix() = default;
    RationalMatrix(std::size_t rows, std::size_t cols);

    static RationalMatrix identity(std::size_t size);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rational& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    const Rational& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

    friend RationalMatrix operator*(const RationalMatrix& lhs, const RationalMatrix& rhs);
    friend bool operator==(const RationalMatrix& lhs, const RationalMatrix& rhs) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> entries_;
};

/// Raised when a closed-form inverse fails A B == I. Carries the first
/// offending entry of the product.
class ClosedFormMismatch : public std::runtime_error {
public:
    ClosedFormMismatch(std::size_t row, std::size_t col, Rational value);

    std::size_t row() const { return row_; }
    std::size_t col() const { return col_; }
    const Rational& value() const { return value_; }

private:
    std::size_t row_;
    std::size_t col_;
    Rational value_;
};

// Closed forms ------------------------------------------------------------

/// Order-k one-sided rule on offsets (0, -1, ..., -k):
/// d_0 = 1 + 1/2 + ... + 1/k, d_i = (-1)^i C(k, i) / i.
Stencil backward_weights(int k);

/// Mirror image of backward_weights on offsets (0, 1, ..., k).
Stencil forward_weights(int k);

/// Offsets -m..n with c_i = (-1)^(i-1) C(n+m, i+m) / (i C(n+m, m)).
Stencil centered_weights(int m, int n);

/// First-derivative rule on an arithmetic progression of nodes,
/// c_i = C(-a_1/d, i-1) C(a_k/d, k-i) / a_i. Offset 0 comes first.
Stencil arithmetic_weights(const ArithmeticNodes& spec);

/// Elementary symmetric polynomial sigma_k(S); sigma_0 == 1.
Rational elementary_symmetric(std::span<const Rational> values, std::size_t k);

/// A_ij = node_j^i, i, j = 1..count (powers start at 1).
RationalMatrix vandermonde_matrix(const NodeSpec& spec);

enum class InverseNormalization {
    /// Scale factor that makes A B == I for every d.
    corrected,
    /// The d^j scaling as printed for symmetric offset nodes; only valid
    /// for d == +-1 and kept so the mismatch path can be exercised.
    as_printed,
};

/// Inverse of vandermonde_matrix(spec) built entrywise from sigma-based closed
/// forms, then certified with A B == B A == I. Throws ClosedFormMismatch when
/// the certification fails.
RationalMatrix closed_form_inverse(const NodeSpec& spec,
                                   InverseNormalization norm = InverseNormalization::corrected);

/// f^(p) rule from column p of the closed-form inverse, scaled by p!.
/// Offset 0 first, then the nodes; accuracy order count - p + 1.
Stencil derivative_weights(const NodeSpec& spec, int p);

/// Weights for the last column of the inverse, evaluated exactly as the
/// published closed form states it (no p! factor). Indexed like nodes_of.
std::vector<Rational> printed_last_column(const NodeSpec& spec);

/// Same for the second-to-last column.
std::vector<Rational> printed_second_last_column(const NodeSpec& spec);

// Oracle ------------------------------------------------------------------

/// Solves the moment system sum_i w_i node_i^m = p! [m == p], m = 1..count,
/// by exact Gaussian elimination. A zero node, if present, is dropped and
/// recovered as the derived offset-0 weight. Offset 0 comes first in the
/// result. Throws std::invalid_argument on duplicate nodes or p out of range.
Stencil oracle_weights(std::span<const Rational> nodes, int p);

/// Checks sum_i w_i o_i^m == p! [m == p] for m = 0 .. p + q - 1.
bool satisfies_moment_conditions(const Stencil& s);

// Application ---------------------------------------------------------------

/// h^-p sum_i w_i samples(o_i). Weights are rounded to double once here.
/// Throws std::invalid_argument when a sample is missing.
double apply_stencil(const Stencil& s, const std::map<Rational, double>& samples, double h);

/// Convenience: samples f at x + o_i h.
template <class F>
double apply_stencil_to(const Stencil& s, F&& f, double x, double h) {
    std::map<Rational, double> samples;
    for (const auto& o : s.offsets) samples.emplace(o, f(x + to_double(o) * h));
    return apply_stencil(s, samples, h);
}

/// Weights as doubles, in offset order.
std::vector<double> weights_as_double(const Stencil& s);

}  // namespace hjsweep
