#pragma once

// Upwind schemes for the factored equation
//
//     prod_i (w + n x_i w_{x_i}) = f   on (0,1]^n,
//
// whose solution w relates to the continuum ranking function u through
// u = n (x_1 ... x_n)^(1/n) w. Every scheme is solved in one lexicographic
// sweep: at each node the discrete equation is a degree-n polynomial in the
// unknown value and the largest real root is committed.

#include "hjsweep/grid.hpp"

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hjsweep {

struct SchemeConfig {
    int order = 1;
    bool filtered = false;
    /// The filter accepts the high-order value when |F_1 - f| <= h^threshold_exponent.
    double threshold_exponent = 0.5;
    double root_tol = 1e-12;
    int max_newton_iters = 100;

    double threshold(double h) const;
    void validate() const;
};

/// One axis factor of the scheme at a node, as a linear function of the
/// unknown node value w:
///
///     factor(w) = slope * (w - pivot) + value_at_pivot.
///
/// Sweeps expand around the value of an upwind neighbor so that a locally
/// constant field produces exactly zero differences; from_line builds the
/// plain A w + B form (pivot 0).
struct NodeFactor {
    double slope = 1.0;
    double value_at_pivot = 0.0;
    double pivot = 0.0;

    static NodeFactor from_line(double slope, double intercept) { return {slope, intercept, 0.0}; }

    double intercept() const { return value_at_pivot - slope * pivot; }
    double operator()(double w) const { return slope * (w - pivot) + value_at_pivot; }
};

/// Marker for the "otherwise" branch of the monotone scheme: ordered below
/// every real value.
inline constexpr double kNegativeInfinity = -std::numeric_limits<double>::infinity();

class SolverFailure : public std::runtime_error {
public:
    SolverFailure(std::size_t node, double residual);
    std::size_t node() const { return node_; }
    double residual() const { return residual_; }

private:
    std::size_t node_;
    double residual_;
};

class InvariantFailure : public std::runtime_error {
public:
    InvariantFailure(const std::string& what, std::size_t node, double value);
    std::size_t node() const { return node_; }
    double value() const { return value_; }

private:
    std::size_t node_;
    double value_;
};

/// Order-k axis factor at node j: slope 1 + n j_i d_0 and intercept
/// n j_i sum_{s>=1} d_s w(j - s e_i). Reads outside the cube return 0.
NodeFactor factor(const GridFunction& w, std::span<const std::int64_t> j, int axis, int k);

/// Monotone scheme at the stored value of w(j): product of the first-order
/// factors, or kNegativeInfinity when any factor is negative.
double eval_F1(const GridFunction& w, std::span<const std::int64_t> j);

/// Order-k scheme: plain product of the order-k factors.
double eval_Fk(const GridFunction& w, std::span<const std::int64_t> j, int k);

/// Largest real root of prod_i factor_i(w) = f_val. All factors must share a
/// pivot and have slope >= 1. Closed form for n <= 2, safeguarded Newton on
/// the bracket [r_max, r_max + (f / prod slope)^(1/n)] otherwise. Returns NaN
/// when the factors are not finite. Throws SolverFailure (node index 0) when
/// Newton fails to converge within cfg.max_newton_iters.
double solve_node(std::span<const NodeFactor> factors, double f_val, const SchemeConfig& cfg);

struct SolveReport {
    GridFunction w;
    GridFunction u;
    /// 1 where the high-order value was committed.
    std::vector<std::uint8_t> high_order_used;
    double usage_fraction = 0.0;
    /// max over nodes of |F_1(x, w_h) - f(x)|, +inf where F_1 hits its -inf branch.
    double max_filter_residual = 0.0;
};

/// Single-pass solve. Filtered runs solve F_1 = f and F_k = f at every node
/// and keep the order-k root only inside [kh, 1]^n and only when
/// |F_1(x, w^k) - f(x)| <= h^threshold_exponent. Unfiltered order-k runs
/// lower the stencil order on axis i to j_i where the full stencil would
/// leave the cube. Throws std::invalid_argument for negative or non-finite f.
SolveReport sweep_solve(const GridFunction& f, const SchemeConfig& cfg);

template <class F>
SolveReport sweep_solve(F&& f, const GridSpec& spec, const SchemeConfig& cfg) {
    return sweep_solve(GridFunction::sample(spec, std::forward<F>(f)), cfg);
}

/// u = n (x_1 ... x_n)^(1/n) w nodewise.
GridFunction back_transform(const GridFunction& w);

/// max over nodes of |F_1(x, w) - f(x)|.
double filter_residual(const GridFunction& w, const GridFunction& f);

/// filter_residual, throwing InvariantFailure (naming the worst node) when it
/// exceeds h^threshold_exponent.
double filter_residual_check(const SolveReport& report, const GridFunction& f, const SchemeConfig& cfg);

/// Checks 0 <= w <= (max f + sqrt(h))^(1/n) at every node, up to a few ulps of
/// rounding. Reports the first offending node through `offending` when given.
bool stability_check(const GridFunction& w, const GridFunction& f, std::size_t* offending = nullptr);
inline bool stability_check(const SolveReport& report, const GridFunction& f, std::size_t* offending = nullptr) {
    return stability_check(report.w, f, offending);
}

}  // namespace hjsweep
