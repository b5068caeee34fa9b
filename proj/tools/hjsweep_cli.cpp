// Command line front end: coeffs, solve, bench, rank.

#include "hjsweep/bench.hpp"
#include "hjsweep/fd_coeffs.hpp"
#include "hjsweep/grid.hpp"
#include "hjsweep/hj_solver.hpp"
#include "hjsweep/ranking.hpp"
#include "hjsweep/test_problems.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

using namespace hjsweep;
namespace fs = std::filesystem;

namespace {

struct CoeffsArgs {
    std::string family = "backward";
    int k = 1;
    std::optional<int> m;
    int n = 1;
    std::string a = "1";
    std::string d = "1";
    int p = 1;
};

struct SolveArgs {
    int dim = 2;
    std::int64_t mesh = 64;
    int order = 1;
    std::string filtered = "off";
    std::string problem = "f1";
    std::map<std::string, double> params;
    double threshold_exponent = 0.5;
    std::string w_out;
    std::string u_out;
};

struct BenchArgs {
    std::string problem = "f1";
    std::vector<int> orders{1, 2, 3, 5, 8, 13};
    std::string filtered = "both";
    std::vector<std::int64_t> meshes{32, 64, 128, 256, 512, 1024};
    std::string out = "bench_out";
    double threshold_exponent = 0.5;
    std::uint64_t seed = 1;
    std::map<std::string, double> params;
    bool no_timing = false;
};

struct RankArgs {
    std::string in;
    std::int64_t mesh = 128;
    int order = 2;
    int smoothing = 0;
    std::string out;
    double threshold_exponent = 0.5;
};

bool on_off(const std::string& v) { return v == "on"; }

int run_coeffs(const CoeffsArgs& args) {
    Stencil s;
    if (args.family == "backward") {
        s = backward_weights(args.k);
    } else if (args.family == "forward") {
        s = forward_weights(args.k);
    } else if (args.family == "centered") {
        s = centered_weights(args.m.value_or(1), args.n);
    } else if (args.family == "arith") {
        const ArithmeticNodes nodes{parse_rational(args.a), parse_rational(args.d), args.k};
        s = args.p == 1 ? arithmetic_weights(nodes) : derivative_weights(nodes, args.p);
    } else if (args.family == "general") {
        if (args.m)
            s = derivative_weights(OffsetNodes{*args.m, args.n, parse_rational(args.d)}, args.p);
        else
            s = derivative_weights(ArithmeticNodes{parse_rational(args.a), parse_rational(args.d), args.k}, args.p);
    } else {
        throw CLI::ValidationError("--family", "unknown family " + args.family);
    }
    for (std::size_t i = 0; i < s.offsets.size(); ++i)
        std::cout << to_string(s.offsets[i]) << '\t' << to_fraction_string(s.weights[i]) << '\n';
    std::cout << "# derivative=" << s.derivative_order << " accuracy=" << s.accuracy_order << '\n';
    return 0;
}

int run_solve(const SolveArgs& args) {
    const TestProblem problem = problem_by_name(args.problem, args.params, args.dim);
    SchemeConfig cfg;
    cfg.order = args.order;
    cfg.filtered = on_off(args.filtered);
    cfg.threshold_exponent = args.threshold_exponent;
    const GridSpec spec(problem.dim, args.mesh);
    const GridFunction f = GridFunction::sample(spec, problem.density);
    const SolveReport report = sweep_solve(f, cfg);
    if (!args.w_out.empty()) write_binary(report.w, fs::path(args.w_out));
    if (!args.u_out.empty()) write_binary(report.u, fs::path(args.u_out));
    std::cout << std::setprecision(10) << spec.h() << ',' << cfg.order << ',' << (cfg.filtered ? 1 : 0) << ','
              << report.usage_fraction << ',' << report.max_filter_residual << '\n';
    return 0;
}

int run_bench(const BenchArgs& args) {
    const TestProblem problem = problem_by_name(args.problem, args.params, 2);
    StudyOptions opts;
    opts.orders = args.orders;
    opts.meshes = args.meshes;
    opts.filtered.clear();
    if (args.filtered != "on") opts.filtered.push_back(false);
    if (args.filtered != "off") opts.filtered.push_back(true);
    opts.base.threshold_exponent = args.threshold_exponent;
    opts.record_timing = !args.no_timing;

    const auto residual = verify_residual(problem, sample_points(problem, 200, args.seed));
    std::cout << "manufactured residual " << problem.name << ": " << residual.max_residual
              << (residual.passed ? " (ok)" : " (FAILED)") << '\n';

    const ConvergenceReport report = run_study(problem, opts);
    const fs::path out(args.out);
    fs::create_directories(out);
    emit_csv(report, out / "study.csv");
    emit_plot_data(report, out / "plot");
    std::ofstream orders(out / "orders.csv");
    emit_orders(report, orders);
    emit_orders(report, std::cout);

    const bool ok = report.structural_invariants_hold();
    std::cout << "structural invariants: " << (ok ? "held" : "VIOLATED") << '\n';
    return ok ? 0 : 1;
}

int run_rank(const RankArgs& args) {
    PointCloud cloud;
    try {
        cloud = load_points(fs::path(args.in));
    } catch (const InputError& e) {
        std::cerr << "error: " << args.in << ": " << e.what() << '\n';
        return 2;
    }
    SchemeConfig cfg;
    cfg.order = args.order;
    cfg.filtered = true;
    cfg.threshold_exponent = args.threshold_exponent;
    const RankResult result = rank_points(cloud, GridSpec(2, args.mesh), cfg, args.smoothing);

    std::ofstream out(args.out);
    if (!out) throw std::runtime_error("cannot open " + args.out + " for writing");
    out << std::setprecision(17) << "x1,x2,pde_rank,exact_layer\n";
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const auto raw = cloud.raw(i);
        out << raw[0] << ',' << raw[1] << ',' << result.pde_rank[i] << ',' << result.exact_layer[i] << '\n';
    }
    std::cout << "points " << cloud.size() << ", spearman " << result.agreement << '\n';
    return 0;
}

void add_problem_params(CLI::App* cmd, std::map<std::string, double>& params) {
    cmd->add_option_function<double>("--kparam", [&params](double v) { params["kparam"] = v; }, "f1 frequency");
    cmd->add_option_function<double>("--C", [&params](double v) { params["C"] = v; }, "f2 kink strength");
    cmd->add_option_function<double>("--c", [&params](double v) { params["c"] = v; }, "const level");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Filtered upwind schemes for u_x1 ... u_xn = f and PDE-based ranking"};
    app.require_subcommand(1);

    CoeffsArgs coeffs;
    auto* c = app.add_subcommand("coeffs", "Exact finite-difference weights");
    c->add_option("--family", coeffs.family)->check(CLI::IsMember({"backward", "forward", "centered", "arith", "general"}));
    c->add_option("--k", coeffs.k, "order (backward/forward) or node count (arith)");
    c->add_option("--m", coeffs.m, "nodes left of 0");
    c->add_option("--n", coeffs.n, "nodes right of 0");
    c->add_option("--a", coeffs.a, "first node (rational)");
    c->add_option("--d", coeffs.d, "node spacing (rational)");
    c->add_option("--p", coeffs.p, "derivative order");

    SolveArgs solve;
    auto* s = app.add_subcommand("solve", "Single solve of a test problem");
    s->add_option("--dim", solve.dim);
    s->add_option("--mesh,-N", solve.mesh)->check(CLI::PositiveNumber);
    s->add_option("--order,-k", solve.order);
    s->add_option("--filtered", solve.filtered)->check(CLI::IsMember({"on", "off"}));
    s->add_option("--problem", solve.problem)->check(CLI::IsMember({"f1", "f2", "const"}));
    s->add_option("--threshold-exponent", solve.threshold_exponent);
    s->add_option("--w-out", solve.w_out, "binary grid for w");
    s->add_option("--u-out", solve.u_out, "binary grid for u");
    add_problem_params(s, solve.params);

    BenchArgs bench;
    auto* b = app.add_subcommand("bench", "Convergence study");
    b->add_option("--problem", bench.problem)->check(CLI::IsMember({"f1", "f2", "const"}));
    b->add_option("--orders", bench.orders)->delimiter(',');
    b->add_option("--filtered", bench.filtered)->check(CLI::IsMember({"on", "off", "both"}));
    b->add_option("--meshes", bench.meshes)->delimiter(',');
    b->add_option("--out", bench.out);
    b->add_option("--threshold-exponent", bench.threshold_exponent);
    b->add_option("--seed", bench.seed, "seed for the residual check points");
    b->add_flag("--no-timing", bench.no_timing, "record wall_time as 0");
    add_problem_params(b, bench.params);

    RankArgs rank;
    auto* r = app.add_subcommand("rank", "Rank a 2-D point cloud");
    r->add_option("--in", rank.in)->required();
    r->add_option("--mesh", rank.mesh)->check(CLI::PositiveNumber);
    r->add_option("--order", rank.order);
    r->add_option("--smoothing", rank.smoothing)->check(CLI::NonNegativeNumber);
    r->add_option("--out", rank.out)->required();
    r->add_option("--threshold-exponent", rank.threshold_exponent);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*c) return run_coeffs(coeffs);
        if (*s) return run_solve(solve);
        if (*b) return run_bench(bench);
        if (*r) return run_rank(rank);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
