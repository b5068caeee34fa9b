// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero when any criterion fails.

#include "hjsweep/bench.hpp"
#include "hjsweep/fd_coeffs.hpp"
#include "hjsweep/fd_identities.hpp"
#include "hjsweep/ranking.hpp"
#include "hjsweep/test_problems.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

using namespace hjsweep;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& body) {
    const auto t0 = Clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out.pass = false;
        out.detail = std::string("exception: ") + e.what();
    }
    if (!out.pass) ++failures;
    std::cout << (out.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << title << " (" << seconds_since(t0)
              << " s)";
    if (!out.detail.empty()) std::cout << " -- " << out.detail;
    std::cout << std::endl;
}

Stencil oracle_for(const Stencil& s) {
    std::vector<Rational> nodes;
    for (const auto& o : s.offsets)
        if (o != 0) nodes.push_back(o);
    return oracle_weights(nodes, s.derivative_order);
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

double f1_study_seconds = 0.0;

const ConvergenceReport& f1_study() {
    static const ConvergenceReport report = [] {
        const auto t0 = Clock::now();
        auto r = run_study(problem_f1(), StudyOptions{});
        f1_study_seconds = seconds_since(t0);
        return r;
    }();
    return report;
}

const ErrorRecord* find(const ConvergenceReport& r, std::int64_t n, int order, bool filtered) {
    for (const auto& rec : r.records)
        if (rec.intervals == n && rec.order == order && rec.filtered == filtered) return &rec;
    return nullptr;
}

std::vector<NodeSpec> listed_specs() {
    std::vector<NodeSpec> specs;
    const std::pair<Rational, Rational> ad[] = {{1, 1}, {-1, -1}, {Rational(1, 2), Rational(1, 3)}};
    for (const auto& [a, d] : ad)
        for (int n = 1; n <= 8; ++n) specs.push_back(ArithmeticNodes{a, d, n});
    for (int m = 1; m <= 4; ++m)
        for (int n = 1; n <= 4; ++n) specs.push_back(OffsetNodes{m, n, 1});
    return specs;
}

Outcome criterion1() {
    Outcome out;
    const auto t0 = Clock::now();
    for (int k = 1; k <= 13; ++k) {
        out.require(backward_weights(k).same_rule(oracle_for(backward_weights(k))), "backward k=" + std::to_string(k));
        out.require(forward_weights(k).same_rule(oracle_for(forward_weights(k))), "forward k=" + std::to_string(k));
    }
    for (int m = 1; m <= 4; ++m)
        for (int n = 1; n <= 4; ++n)
            out.require(centered_weights(m, n).same_rule(oracle_for(centered_weights(m, n))),
                        "centered " + std::to_string(m) + "," + std::to_string(n));
    for (const auto& spec : listed_specs()) {
        const auto nodes = nodes_of(spec);
        for (int p = 1; p <= static_cast<int>(nodes.size()); ++p)
            out.require(derivative_weights(spec, p).same_rule(oracle_weights(nodes, p)), "derivative_weights mismatch");
    }
    const double t = seconds_since(t0);
    out.require(t < 5.0, "runtime " + fmt(t) + " s >= 5 s");
    return out;
}

Outcome criterion2() {
    using namespace identities;
    Outcome out;
    const auto t0 = Clock::now();
    for (std::int64_t n = 2; n <= 10; ++n)
        for (std::int64_t m = -5; m <= 5; ++m)
            for (std::int64_t k = 1; k <= n - 1; ++k) out.require(binomial_power_sum(n, m, k) == 0, "BinomialPowerZero");
    const Rational rs[] = {Rational(1, 2), Rational(-1, 2), Rational(3, 2), Rational(-3, 2), Rational(2)};
    const Rational lambdas[] = {Rational(0), Rational(1, 3), Rational(-7, 4), Rational(5)};
    for (const auto& r : rs)
        for (std::int64_t p = 1; p <= 8; ++p) {
            out.require(fractional_sum(r, p) == 1, "FractionalSum1");
            for (std::int64_t k = 1; k <= p; ++k) out.require(fractional_zero_sum(r, p, k) == 0, "FractionalZeroSum");
            for (std::int64_t k = 0; k <= p; ++k)
                for (const auto& l : lambdas) out.require(g_polynomial(r, p, k, l) == power(l, k), "GK");
        }
    for (const auto& spec : listed_specs()) {
        const auto A = vandermonde_matrix(spec);
        const auto B = closed_form_inverse(spec);
        const auto I = RationalMatrix::identity(A.rows());
        out.require(A * B == I && B * A == I, "closed_form_inverse not exact");
    }
    const double t = seconds_since(t0);
    out.require(t < 10.0, "runtime " + fmt(t) + " s >= 10 s");
    return out;
}

Outcome criterion3() {
    Outcome out;
    const NodeSpec spec = ArithmeticNodes{1, 1, 2};
    out.require(printed_last_column(spec) == std::vector<Rational>{-1, Rational(1, 2)}, "printed column is not (-1, 1/2)");
    const auto oracle = oracle_weights(nodes_of(spec), 2);
    out.require(oracle.weight_at(1) == -2 && oracle.weight_at(2) == 1, "oracle is not (-2, 1)");
    const auto corrected = derivative_weights(spec, 2);
    out.require(corrected.weight_at(1) == -2 && corrected.weight_at(2) == 1, "derivative_weights lacks p!");
    return out;
}

Outcome criterion4() {
    Outcome out;
    double worst = 0.0;
    for (std::int64_t n : {32, 256})
        for (int k : {1, 2, 3, 5, 8, 13})
            for (bool filtered : {false, true}) {
                SchemeConfig cfg;
                cfg.order = k;
                cfg.filtered = filtered;
                const auto rep = sweep_solve(GridFunction(GridSpec(2, n), 1.0), cfg);
                for (double v : rep.w.values()) worst = std::max(worst, std::abs(v - 1.0));
            }
    out.require(worst <= 1e-10, "max |w - 1| = " + fmt(worst));
    if (out.pass) out.detail = "max |w - 1| = " + fmt(worst);
    return out;
}

Outcome criterion5() {
    Outcome out;
    std::size_t runs = 0;
    auto check = [&](const ConvergenceReport& rep) {
        for (const auto& r : rep.records) {
            if (!r.filtered) continue;
            ++runs;
            const std::string tag = rep.problem + " N=" + std::to_string(r.intervals) + " k=" + std::to_string(r.order);
            out.require(r.stable, "stability violated " + tag);
            out.require(r.residual_ok && r.max_filter_residual <= std::sqrt(r.h), "filter residual violated " + tag);
        }
    };
    check(f1_study());
    StudyOptions f2_opts;
    f2_opts.filtered = {true};
    check(run_study(problem_f2(), f2_opts));
    if (out.pass) out.detail = std::to_string(runs) + " filtered runs, zero violations";
    return out;
}

Outcome criterion6() {
    Outcome out;
    const auto& rep = f1_study();
    const double study_time = f1_study_seconds;
    const auto& orders = rep.observed_orders;
    const double k1 = orders.at({1, false}).L1_u;
    const double k2 = orders.at({2, true}).L1_u;
    out.require(k1 >= 0.8 && k1 <= 1.3, "k=1 L1 order " + fmt(k1));
    out.require(k2 >= 1.5, "filtered k=2 L1 order " + fmt(k2));
    for (std::int64_t n : {512, 1024}) {
        const auto* a = find(rep, n, 2, true);
        const auto* b = find(rep, n, 1, false);
        out.require(a && b && a->err_L1_u < b->err_L1_u, "filtered k=2 not below k=1 at N=" + std::to_string(n));
    }
    std::string high;
    for (int k : {3, 5, 8, 13}) {
        const auto series = rep.series({k, true});
        for (std::size_t i = 1; i < series.size(); ++i)
            out.require(series[i].err_L1_u <= series[i - 1].err_L1_u,
                        "filtered k=" + std::to_string(k) + " error increases at N=" + std::to_string(series[i].intervals));
        const double q = orders.at({k, true}).L1_u;
        out.require(q >= 0.7, "filtered k=" + std::to_string(k) + " order " + fmt(q));
        high += " k" + std::to_string(k) + "=" + fmt(q);
    }
    out.require(study_time <= 600.0, "study took " + fmt(study_time) + " s");
    if (out.pass) out.detail = "orders k1=" + fmt(k1) + " fk2=" + fmt(k2) + high + ", study " + fmt(study_time) + " s";
    return out;
}

Outcome criterion7() {
    Outcome out;
    const auto& rep = f1_study();
    bool blew_up = false;
    for (const auto& r : rep.series({5, false})) blew_up = blew_up || !(r.err_Linf_u <= 1e3);
    out.require(blew_up, "unfiltered k=5 stayed bounded");
    const double q2 = rep.observed_orders.at({2, false}).L1_u;
    const auto s2 = rep.series({2, false});
    bool decreasing = true;
    for (std::size_t i = 1; i < s2.size(); ++i) decreasing = decreasing && s2[i].err_L1_u < s2[i - 1].err_L1_u;
    out.require(decreasing && q2 >= 1.5, "unfiltered k=2 does not converge (order " + fmt(q2) + ")");
    if (out.pass) out.detail = "unfiltered k=2 order " + fmt(q2);
    return out;
}

Outcome criterion8() {
    Outcome out;
    const auto& rep = f1_study();
    std::string row;
    double previous = 2.0;
    int previous_k = 0;
    for (int k : {1, 2, 3, 5, 8, 13}) {
        const auto* r = find(rep, 256, k, true);
        out.require(r != nullptr, "missing N=256 record");
        if (!r) continue;
        row += " k" + std::to_string(k) + "=" + fmt(r->usage_fraction);
        if (r->usage_fraction > previous)
            out.require(false, "N=256 usage rises from k=" + std::to_string(previous_k) + " (" + fmt(previous) +
                                   ") to k=" + std::to_string(k) + " (" + fmt(r->usage_fraction) + ")");
        previous = r->usage_fraction;
        previous_k = k;
    }
    const auto s2 = rep.series({2, true});
    for (std::size_t i = 1; i < s2.size(); ++i)
        out.require(s2[i].usage_fraction > s2[i - 1].usage_fraction,
                    "k=2 usage does not increase at N=" + std::to_string(s2[i].intervals));
    const auto* finest = find(rep, 1024, 2, true);
    out.require(finest && finest->usage_fraction > 0.9, "k=2 usage at N=1024 not above 0.9");
    if (finest) row += "; k2@1024=" + fmt(finest->usage_fraction);
    out.detail = out.detail.empty() ? "N=256:" + row : out.detail + " [N=256:" + row + "]";
    return out;
}

Outcome criterion9() {
    Outcome out;
    const auto f1 = problem_f1();
    const auto f2 = problem_f2();
    const auto bad = problem_f2_unnormalized();
    const auto r1 = verify_residual(f1, sample_points(f1, 1000, 2024), 1e-4, 1e-6);
    const auto r2 = verify_residual(f2, sample_points(f2, 1000, 2025), 1e-4, 1e-6);
    out.require(r1.passed, "f1 residual " + fmt(r1.max_residual));
    out.require(r2.passed, "f2 residual " + fmt(r2.max_residual));

    const auto pts = sample_points(bad, 1000, 2026);
    const auto rb = verify_residual(bad, pts, 1e-4, 1e-6);
    out.require(!rb.passed, "printed u2 unexpectedly passes");
    double min_ratio = INFINITY, max_ratio = 0.0;
    const double c = bad.params.at("C");
    for (const auto& x : pts) {
        const auto one = verify_residual(bad, {x}, 1e-4, 1e-6);
        const double ratio = 1.0 + one.max_residual / bad.density(x);
        min_ratio = std::min(min_ratio, ratio);
        max_ratio = std::max(max_ratio, ratio);
    }
    const double expected = (c + 2) * (c + 2);
    out.require(std::abs(min_ratio - expected) < 1e-3 && std::abs(max_ratio - expected) < 1e-3,
                "printed/true ratio in [" + fmt(min_ratio) + ", " + fmt(max_ratio) + "]");
    if (out.pass)
        out.detail = "f1 " + fmt(r1.max_residual) + ", f2 " + fmt(r2.max_residual) + ", printed u2 ratio " + fmt(max_ratio);
    return out;
}

Outcome criterion10() {
    Outcome out;
    const auto t0 = Clock::now();
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Point2> raw(10000);
    for (auto& p : raw) p = {u(rng), u(rng)};
    const auto cloud = PointCloud::from_raw(raw);
    SchemeConfig cfg;
    cfg.order = 2;
    cfg.filtered = true;
    const auto result = rank_points(cloud, GridSpec(2, 128), cfg, 0);
    out.require(result.agreement >= 0.95, "spearman " + fmt(result.agreement));

    std::uniform_int_distribution<int> size(1, 500);
    std::uniform_int_distribution<int> coarse(0, 15);
    int mismatches = 0;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Point2> pts(static_cast<std::size_t>(size(rng)));
        for (auto& p : pts) p = trial % 2 ? Point2{double(coarse(rng)), double(coarse(rng))} : Point2{u(rng), u(rng)};
        mismatches += pareto_peel(pts) != pareto_peel_naive(pts);
    }
    out.require(mismatches == 0, std::to_string(mismatches) + " peel mismatches");
    const double t = seconds_since(t0);
    out.require(t < 30.0, "runtime " + fmt(t) + " s");
    if (out.pass) out.detail = "spearman " + fmt(result.agreement);
    return out;
}

}  // namespace

int main() {
    report(1, "coefficient oracle equivalence", criterion1);
    report(2, "identity lemmas and exact inverses", criterion2);
    report(3, "factorial-correction fixture", criterion3);
    report(4, "constant-problem exactness", criterion4);
    report(5, "structural guarantees on filtered runs", criterion5);
    report(6, "convergence rates on f1", criterion6);
    report(7, "instability reproduction", criterion7);
    report(8, "usage-fraction trends", criterion8);
    report(9, "manufactured-solution certification", criterion9);
    report(10, "ranking pipeline", criterion10);
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criterion(s) failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
