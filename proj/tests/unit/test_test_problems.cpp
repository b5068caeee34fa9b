#include "hjsweep/test_problems.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace hjsweep;

namespace {

double eval(const PointFunction& f, double a, double b) {
    const double x[] = {a, b};
    return f(x);
}

}  // namespace

TEST_CASE("problem_f1 examples") {
    const auto p = problem_f1();
    CHECK(p.name == "f1");
    CHECK(p.smooth);
    CHECK(p.params.at("kparam") == 20.0);
    const double s = std::sin(20.0);
    CHECK(eval(*p.exact_u, 1.0, 1.0) == doctest::Approx((2 * s * s + 40) / 21).epsilon(1e-15));
    CHECK(eval(*p.exact_u, 0.0, 0.7) == 0.0);
    CHECK_THROWS_AS(problem_f1(0.0), std::invalid_argument);
}

TEST_CASE("problem_f2 examples") {
    const auto p = problem_f2();
    CHECK_FALSE(p.smooth);
    CHECK(eval(p.density, 1.0, 1.0) == doctest::Approx(476.0 / 144.0).epsilon(1e-15));
    CHECK(eval(*p.exact_u, 0.0, 0.4) == 0.0);
    // Symmetry under coordinate swap.
    for (double a : {0.1, 0.35, 0.8})
        for (double b : {0.2, 0.55, 0.95}) {
            CHECK(eval(p.density, a, b) == doctest::Approx(eval(p.density, b, a)).epsilon(1e-15));
            CHECK(eval(*p.exact_u, a, b) == doctest::Approx(eval(*p.exact_u, b, a)).epsilon(1e-15));
        }
}

TEST_CASE("problem_const examples") {
    const auto one = problem_const(1.0);
    CHECK(eval(*one.exact_u, 0.25, 0.64) == doctest::Approx(2.0 * 0.4));
    const auto zero = problem_const(0.0);
    CHECK(eval(*zero.exact_u, 0.3, 0.9) == 0.0);
    const auto four = problem_const(4.0);
    CHECK(eval(*four.exact_u, 0.25, 0.64) == doctest::Approx(4.0 * 0.4));
    const auto three_d = problem_const(8.0, 3);
    const double x[] = {1.0, 1.0, 1.0};
    CHECK((*three_d.exact_u)(x) == doctest::Approx(6.0));
    CHECK_THROWS_AS(problem_const(-1.0), std::invalid_argument);
}

TEST_CASE("problem_by_name") {
    CHECK(problem_by_name("f1", {{"kparam", 5}}).params.at("kparam") == 5);
    CHECK(problem_by_name("f2", {{"C", 3}}).params.at("C") == 3);
    CHECK(problem_by_name("const", {{"c", 2}}, 3).dim == 3);
    CHECK_THROWS_AS(problem_by_name("f9"), std::invalid_argument);
}

TEST_CASE("densities are non-negative on random points") {
    for (const auto& p : {problem_f1(), problem_f2()}) {
        SampleOptions opts;
        opts.axis_margin = 0.0;
        opts.diagonal_margin = 0.0;
        for (const auto& x : sample_points(p, 100000, 11, opts)) CHECK_UNARY(p.density(x) >= 0.0);
    }
}

TEST_CASE("sample_points honors margins and seeds") {
    const auto p = problem_f2();
    const auto pts = sample_points(p, 500, 3);
    for (const auto& x : pts) {
        CHECK(x[0] >= 0.05);
        CHECK(x[1] >= 0.05);
        CHECK(std::abs(x[0] - x[1]) > 0.05);
    }
    CHECK(sample_points(p, 10, 3) == sample_points(p, 10, 3));
    CHECK(sample_points(p, 10, 3) != sample_points(p, 10, 4));
}

TEST_CASE("verify_residual certifies the shipped pairs") {
    const auto c = problem_const(1.0);
    CHECK(verify_residual(c, sample_points(c, 1000, 1), 1e-4, 1e-8).passed);

    const auto f1 = problem_f1();
    const auto r1 = verify_residual(f1, sample_points(f1, 1000, 2));
    MESSAGE("f1 residual " << r1.max_residual);
    CHECK(r1.passed);
    CHECK(r1.max_residual < 1e-6);

    const auto f2 = problem_f2();
    const auto r2 = verify_residual(f2, sample_points(f2, 1000, 3));
    MESSAGE("f2 residual " << r2.max_residual);
    CHECK(r2.passed);
}

TEST_CASE("printed u2 fails by the (C + 2)^2 factor") {
    const auto bad = problem_f2_unnormalized();
    const auto good = problem_f2();
    const auto pts = sample_points(bad, 200, 5);
    const auto r = verify_residual(bad, pts);
    CHECK_FALSE(r.passed);
    // Residual at the worst point is f ((C+2)^2 - 1).
    const double f = bad.density(r.worst_point);
    CHECK(r.max_residual / f == doctest::Approx(143.0).epsilon(1e-6));
    CHECK(good.density(r.worst_point) == f);
}

TEST_CASE("verify_residual needs an exact solution") {
    auto p = problem_f1();
    p.exact_u.reset();
    CHECK_THROWS_AS(verify_residual(p, {{0.5, 0.5}}), std::invalid_argument);
}

TEST_CASE("lipschitz_spot_check") {
    const auto pairs = sample_pairs(2, 2000, 9);
    CHECK(lipschitz_spot_check(problem_const(1.0), pairs).w_estimate == doctest::Approx(0.0).epsilon(1e-12));
    for (const auto& p : {problem_f1(), problem_f2()}) {
        const auto small = lipschitz_spot_check(p, sample_pairs(2, 2000, 9));
        const auto large = lipschitz_spot_check(p, sample_pairs(2, 20000, 10));
        MESSAGE(p.name << " w-Lipschitz " << small.w_estimate << " / " << large.w_estimate << ", bound "
                       << large.bound_estimate);
        CHECK(std::isfinite(large.w_estimate));
        CHECK(large.w_estimate < 2.0 * small.w_estimate + 1.0);
    }
}
