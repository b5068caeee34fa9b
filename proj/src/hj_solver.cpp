#include "hjsweep/hj_solver.hpp"

#include "hjsweep/fd_coeffs.hpp"

#include <algorithm>
#include <cmath>

namespace hjsweep {

// Config and errors -------------------------------------------------------------

double SchemeConfig::threshold(double h) const { return std::pow(h, threshold_exponent); }

void SchemeConfig::validate() const {
    if (order < 1 || order > kMaxStencilOrder)
        throw std::invalid_argument("scheme order must be in [1, " + std::to_string(kMaxStencilOrder) + "]");
    if (!std::isfinite(threshold_exponent) || threshold_exponent <= 0)
        throw std::invalid_argument("threshold exponent must be positive and finite");
    if (!(root_tol > 0)) throw std::invalid_argument("root tolerance must be positive");
    if (max_newton_iters < 1) throw std::invalid_argument("Newton iteration cap must be positive");
}

SolverFailure::SolverFailure(std::size_t node, double residual)
    : std::runtime_error("root solve did not converge at node " + std::to_string(node) +
                         " (residual " + std::to_string(residual) + ")"),
      node_(node),
      residual_(residual) {}

InvariantFailure::InvariantFailure(const std::string& what, std::size_t node, double value)
    : std::runtime_error(what + " at node " + std::to_string(node) + " (value " + std::to_string(value) + ")"),
      node_(node),
      value_(value) {}

namespace {

/// Backward weights d_0..d_k as doubles for every order up to max_order.
class UpwindWeights {
public:
    explicit UpwindWeights(int max_order) : table_(static_cast<std::size_t>(max_order) + 1) {
        for (int k = 1; k <= max_order; ++k) table_[static_cast<std::size_t>(k)] = weights_as_double(backward_weights(k));
    }
    std::span<const double> operator()(int k) const { return table_[static_cast<std::size_t>(k)]; }

private:
    std::vector<std::vector<double>> table_;
};

const UpwindWeights& first_order_weights() {
    static const UpwindWeights table(1);
    return table;
}

/// Axis factor from in-range upwind reads; requires k <= j_axis.
NodeFactor axis_factor(const double* w, std::size_t linear, std::int64_t j_axis, std::size_t stride, int dim,
                       std::span<const double> d, int k, double pivot) {
    if (j_axis == 0) return {1.0, pivot, pivot};
    const double mult = static_cast<double>(dim) * static_cast<double>(j_axis);
    double acc = 0.0;
    for (int s = 1; s <= k; ++s) acc += d[static_cast<std::size_t>(s)] * (w[linear - static_cast<std::size_t>(s) * stride] - pivot);
    return {1.0 + mult * d[0], pivot + mult * acc, pivot};
}

/// Value of an upwind neighbor, used as the expansion point of all factors
/// at a node; 0 at the origin.
double pivot_at(const double* w, std::size_t linear, std::span<const std::int64_t> j, const GridSpec& spec) {
    for (int a = 0; a < spec.dim(); ++a)
        if (j[static_cast<std::size_t>(a)] >= 1) return w[linear - spec.stride(a)];
    return 0.0;
}

void first_order_factors(const double* w, std::size_t linear, std::span<const std::int64_t> j, const GridSpec& spec,
                         double pivot, std::vector<NodeFactor>& out) {
    const auto d = first_order_weights()(1);
    for (int a = 0; a < spec.dim(); ++a)
        out[static_cast<std::size_t>(a)] = axis_factor(w, linear, j[static_cast<std::size_t>(a)], spec.stride(a), spec.dim(), d, 1, pivot);
}

/// Monotone scheme value at `value`: -inf when any factor is negative.
double monotone_product(std::span<const NodeFactor> factors, double value) {
    double prod = 1.0;
    for (const auto& fac : factors) {
        const double v = fac(value);
        if (!(v >= 0.0)) return kNegativeInfinity;
        prod *= v;
    }
    return prod;
}

double residual_of(double scheme_value, double f) {
    if (scheme_value == kNegativeInfinity || std::isnan(scheme_value)) return std::numeric_limits<double>::infinity();
    return std::abs(scheme_value - f);
}

struct NewtonFailure {
    double residual;
};

/// Largest root in shifted coordinates; throws NewtonFailure.
double largest_root(std::span<const NodeFactor> factors, double f, const SchemeConfig& cfg) {
    const double pivot = factors.front().pivot;
    double lo = kNegativeInfinity;
    double slope_product = 1.0;
    for (const auto& fac : factors) {
        if (!std::isfinite(fac.slope) || !std::isfinite(fac.value_at_pivot) || fac.pivot != pivot)
            return std::numeric_limits<double>::quiet_NaN();
        lo = std::max(lo, -fac.value_at_pivot / fac.slope);
        slope_product *= fac.slope;
    }
    if (!std::isfinite(f)) return std::numeric_limits<double>::quiet_NaN();

    double delta = lo;
    const std::size_t n = factors.size();
    if (f > 0.0) {
        if (n == 1) {
            delta = (f - factors[0].value_at_pivot) / factors[0].slope;
        } else if (n == 2) {
            const double a0 = factors[0].slope, c0 = factors[0].value_at_pivot;
            const double a1 = factors[1].slope, c1 = factors[1].value_at_pivot;
            const double qa = a0 * a1;
            const double qb = a0 * c1 + a1 * c0;
            const double qc = c0 * c1 - f;
            const double diff = a0 * c1 - a1 * c0;
            const double disc = std::sqrt(diff * diff + 4.0 * qa * f);
            if (qb >= 0.0) {
                const double q = -0.5 * (qb + disc);
                delta = (q != 0.0) ? qc / q : 0.0;
            } else {
                delta = (disc - qb) / (2.0 * qa);
            }
        } else {
            auto eval = [&](double x, double& deriv) {
                double prod = 1.0;
                deriv = 0.0;
                for (const auto& fac : factors) {
                    const double v = fac.slope * x + fac.value_at_pivot;
                    deriv = deriv * v + prod * fac.slope;
                    prod *= v;
                }
                return prod - f;
            };
            const double tol = cfg.root_tol * (1.0 + f);
            double bracket_lo = lo;
            double hi = lo + std::pow(f / slope_product, 1.0 / static_cast<double>(n));
            double deriv = 0.0;
            for (int grow = 0; eval(hi, deriv) < 0.0 && grow < 64; ++grow)
                hi = lo + 2.0 * (hi - lo) + std::numeric_limits<double>::min();

            // P is increasing and convex on the bracket, so Newton from the
            // right end decreases monotonically; bisection guards rounding.
            double x = hi;
            bool converged = false;
            double g = 0.0;
            for (int it = 0; it < cfg.max_newton_iters; ++it) {
                g = eval(x, deriv);
                if (std::abs(g) <= tol) {
                    // One more step takes the iterate from tol-accurate to
                    // rounding-accurate.
                    if (deriv > 0.0) {
                        const double polished = x - g / deriv;
                        if (polished >= bracket_lo && polished <= hi) x = polished;
                    }
                    converged = true;
                    break;
                }
                if (g > 0.0)
                    hi = x;
                else
                    bracket_lo = x;
                double next = (deriv > 0.0) ? x - g / deriv : 0.5 * (bracket_lo + hi);
                if (!(next > bracket_lo && next < hi)) next = 0.5 * (bracket_lo + hi);
                const double scale = std::abs(pivot) + std::abs(next);
                if (std::abs(next - x) <= 4.0 * std::numeric_limits<double>::epsilon() * scale ||
                    hi - bracket_lo <= 4.0 * std::numeric_limits<double>::epsilon() * scale) {
                    x = next;
                    converged = true;
                    break;
                }
                x = next;
            }
            if (!converged) throw NewtonFailure{std::abs(g)};
            delta = x;
        }
    }
    delta = std::max(delta, lo);
    double w = pivot + delta;
    // Rounding may leave the limiting factor a few ulps below zero.
    for (int nudge = 0; nudge < 16; ++nudge) {
        bool ok = true;
        for (const auto& fac : factors) ok = ok && fac(w) >= 0.0;
        if (ok) break;
        w = std::nextafter(w, std::numeric_limits<double>::infinity());
    }
    return w;
}

void validate_density(const GridFunction& f) {
    for (std::size_t i = 0; i < f.values().size(); ++i) {
        const double v = f[i];
        if (!std::isfinite(v)) throw std::invalid_argument("right-hand side is not finite at node " + std::to_string(i));
        if (v < 0.0) throw std::invalid_argument("right-hand side is negative at node " + std::to_string(i));
    }
}

void advance(MultiIndex& j, std::int64_t last) {
    for (std::size_t a = j.size(); a-- > 0;) {
        if (++j[a] <= last) return;
        j[a] = 0;
    }
}

}  // namespace

// Factors and scheme evaluation -------------------------------------------------

NodeFactor factor(const GridFunction& w, std::span<const std::int64_t> j, int axis, int k) {
    const auto d = weights_as_double(backward_weights(k));
    const auto a = static_cast<std::size_t>(axis);
    const double mult = static_cast<double>(w.spec().dim()) * static_cast<double>(j[a]);
    // Expanded about the node's current value so a constant field is
    // reproduced without cancellation.
    const double pivot = w.at(j);
    MultiIndex probe(j.begin(), j.end());
    double acc = 0.0;
    for (int s = 1; s <= k; ++s) {
        probe[a] = j[a] - s;
        acc += d[static_cast<std::size_t>(s)] * (w.read_extended(probe) - pivot);
    }
    return {1.0 + mult * d[0], pivot + mult * acc, pivot};
}

double eval_F1(const GridFunction& w, std::span<const std::int64_t> j) {
    const double value = w.at(j);
    double prod = 1.0;
    for (int a = 0; a < w.spec().dim(); ++a) {
        const double v = factor(w, j, a, 1)(value);
        if (!(v >= 0.0)) return kNegativeInfinity;
        prod *= v;
    }
    return prod;
}

double eval_Fk(const GridFunction& w, std::span<const std::int64_t> j, int k) {
    const double value = w.at(j);
    double prod = 1.0;
    for (int a = 0; a < w.spec().dim(); ++a) prod *= factor(w, j, a, k)(value);
    return prod;
}

double solve_node(std::span<const NodeFactor> factors, double f_val, const SchemeConfig& cfg) {
    if (factors.empty()) throw std::invalid_argument("solve_node: no factors");
    if (f_val < 0.0) throw std::invalid_argument("solve_node: negative right-hand side");
    for (const auto& fac : factors) {
        if (fac.pivot != factors.front().pivot) throw std::invalid_argument("solve_node: factors must share a pivot");
        if (fac.slope < 1.0) throw std::invalid_argument("solve_node: factor slope below 1");
    }
    try {
        return largest_root(factors, f_val, cfg);
    } catch (const NewtonFailure& e) {
        throw SolverFailure(0, e.residual);
    }
}

// Sweep ---------------------------------------------------------------------------

SolveReport sweep_solve(const GridFunction& f, const SchemeConfig& cfg) {
    cfg.validate();
    validate_density(f);
    const GridSpec& spec = f.spec();
    const int dim = spec.dim();
    const int k = cfg.order;
    const UpwindWeights weights(k);
    const double threshold = cfg.threshold(spec.h());

    GridFunction w(spec);
    std::vector<std::uint8_t> mask(spec.node_count(), 0);
    double* wv = w.values().data();

    std::vector<NodeFactor> first(static_cast<std::size_t>(dim));
    std::vector<NodeFactor> high(static_cast<std::size_t>(dim));
    MultiIndex j(static_cast<std::size_t>(dim), 0);
    double max_residual = 0.0;
    std::size_t used = 0;

    for (std::size_t linear = 0; linear < spec.node_count(); ++linear, advance(j, spec.intervals())) {
        const double fx = f[linear];
        const double pivot = pivot_at(wv, linear, j, spec);
        first_order_factors(wv, linear, j, spec, pivot, first);

        double committed = 0.0;
        bool high_order = false;
        try {
            if (cfg.filtered) {
                const double w1 = largest_root(first, fx, cfg);
                committed = w1;
                if (in_filter_band(spec, j, k)) {
                    double wk = w1;
                    if (k > 1) {
                        for (int a = 0; a < dim; ++a)
                            high[static_cast<std::size_t>(a)] = axis_factor(wv, linear, j[static_cast<std::size_t>(a)], spec.stride(a), dim, weights(k), k, pivot);
                        wk = largest_root(high, fx, cfg);
                    }
                    if (residual_of(monotone_product(first, wk), fx) <= threshold) {
                        committed = wk;
                        high_order = true;
                    }
                }
            } else if (k == 1) {
                committed = largest_root(first, fx, cfg);
            } else {
                for (int a = 0; a < dim; ++a) {
                    const auto ja = j[static_cast<std::size_t>(a)];
                    const int ke = static_cast<int>(std::min<std::int64_t>(k, ja));
                    high[static_cast<std::size_t>(a)] = axis_factor(wv, linear, ja, spec.stride(a), dim, weights(std::max(ke, 1)), ke, pivot);
                }
                committed = largest_root(high, fx, cfg);
                high_order = true;
            }
        } catch (const NewtonFailure& e) {
            throw SolverFailure(linear, e.residual);
        }

        wv[linear] = committed;
        if (high_order) {
            mask[linear] = 1;
            ++used;
        }
        max_residual = std::max(max_residual, residual_of(monotone_product(first, committed), fx));
    }

    SolveReport report{w, back_transform(w), std::move(mask), 0.0, max_residual};
    report.usage_fraction = static_cast<double>(used) / static_cast<double>(spec.node_count());
    return report;
}

GridFunction back_transform(const GridFunction& w) {
    const GridSpec& spec = w.spec();
    const int dim = spec.dim();
    GridFunction u(spec);
    std::size_t linear = 0;
    for (const auto& j : sweep_order(spec)) {
        double prod = 1.0;
        for (auto c : j) prod *= static_cast<double>(c) * spec.h();
        double root = 0.0;
        if (dim == 1)
            root = prod;
        else if (dim == 2)
            root = std::sqrt(prod);
        else
            root = std::pow(prod, 1.0 / static_cast<double>(dim));
        u[linear] = static_cast<double>(dim) * root * w[linear];
        ++linear;
    }
    return u;
}

// Invariant checks ------------------------------------------------------------------

double filter_residual(const GridFunction& w, const GridFunction& f) {
    const GridSpec& spec = w.spec();
    if (!(f.spec() == spec)) throw std::invalid_argument("filter_residual: grid mismatch");
    std::vector<NodeFactor> first(static_cast<std::size_t>(spec.dim()));
    const double* wv = w.values().data();
    double worst = 0.0;
    std::size_t linear = 0;
    for (const auto& j : sweep_order(spec)) {
        const double pivot = pivot_at(wv, linear, j, spec);
        first_order_factors(wv, linear, j, spec, pivot, first);
        worst = std::max(worst, residual_of(monotone_product(first, wv[linear]), f[linear]));
        ++linear;
    }
    return worst;
}

double filter_residual_check(const SolveReport& report, const GridFunction& f, const SchemeConfig& cfg) {
    const GridSpec& spec = report.w.spec();
    const double threshold = cfg.threshold(spec.h());
    std::vector<NodeFactor> first(static_cast<std::size_t>(spec.dim()));
    const double* wv = report.w.values().data();
    double worst = 0.0;
    std::size_t linear = 0;
    for (const auto& j : sweep_order(spec)) {
        const double pivot = pivot_at(wv, linear, j, spec);
        first_order_factors(wv, linear, j, spec, pivot, first);
        const double r = residual_of(monotone_product(first, wv[linear]), f[linear]);
        if (r > threshold) throw InvariantFailure("filtered residual exceeds threshold", linear, r);
        worst = std::max(worst, r);
        ++linear;
    }
    return worst;
}

bool stability_check(const GridFunction& w, const GridFunction& f, std::size_t* offending) {
    const GridSpec& spec = w.spec();
    double max_f = 0.0;
    for (double v : f.values()) max_f = std::max(max_f, v);
    const double bound = std::pow(max_f + std::sqrt(spec.h()), 1.0 / static_cast<double>(spec.dim()));
    const double slack = 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, bound);
    for (std::size_t i = 0; i < w.values().size(); ++i) {
        const double v = w[i];
        if (!(v >= -slack && v <= bound + slack)) {
            if (offending) *offending = i;
            return false;
        }
    }
    return true;
}

}  // namespace hjsweep
