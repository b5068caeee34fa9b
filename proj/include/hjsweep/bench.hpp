#pragma once

// Convergence studies: solve a test problem on a ladder of meshes for a set
// of schemes and record errors, observed orders and filter usage.

#include "hjsweep/grid.hpp"
#include "hjsweep/hj_solver.hpp"
#include "hjsweep/test_problems.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace hjsweep {

enum class Norm { L1, Linf };

/// L1: h^n sum |u_h - exact| over all nodes; Linf: max over nodes.
double discrete_error(const GridFunction& approx, const PointFunction& exact, Norm norm);

struct ErrorRecord {
    double h = 0.0;
    std::int64_t intervals = 0;
    int order = 1;
    bool filtered = false;
    double err_L1_u = 0.0;
    double err_Linf_u = 0.0;
    double err_L1_w = 0.0;
    double err_Linf_w = 0.0;
    double usage_fraction = 0.0;
    double max_filter_residual = 0.0;
    double wall_time = 0.0;
    /// Only meaningful for filtered and first-order runs.
    bool stable = true;
    bool residual_ok = true;
};

struct SchemeKey {
    int order = 1;
    bool filtered = false;
    friend auto operator<=>(const SchemeKey&, const SchemeKey&) = default;
};

std::string scheme_label(const SchemeKey& key);

struct ObservedOrders {
    double L1_u = 0.0;
    double Linf_u = 0.0;
    double L1_w = 0.0;
    double Linf_w = 0.0;
};

struct ConvergenceReport {
    std::string problem;
    /// Sorted by decreasing h, then order, then unfiltered before filtered.
    std::vector<ErrorRecord> records;
    /// Only for schemes with at least three mesh levels; NaN where any
    /// error in the series is not finite.
    std::map<SchemeKey, ObservedOrders> observed_orders;

    std::vector<ErrorRecord> series(const SchemeKey& key) const;
    /// True when every filtered and every first-order run passed both the
    /// stability bound and the filter-residual bound.
    bool structural_invariants_hold() const;
};

/// Least-squares slope of log(err) against log(h). Requires at least three
/// points with distinct h; throws std::invalid_argument otherwise. Returns
/// NaN when any error is not finite or not positive.
double observed_order(const std::vector<double>& h, const std::vector<double>& err);

struct StudyOptions {
    std::vector<int> orders{1, 2, 3, 5, 8, 13};
    /// Each entry is one "filtered" flag to run.
    std::vector<bool> filtered{false, true};
    std::vector<std::int64_t> meshes{32, 64, 128, 256, 512, 1024};
    SchemeConfig base;
    /// When false, wall_time is recorded as 0 so repeated studies emit
    /// byte-identical CSV.
    bool record_timing = true;
};

/// Runs the full cross product. Unfiltered runs that blow up record +inf
/// errors instead of aborting.
ConvergenceReport run_study(const TestProblem& problem, const StudyOptions& opts);

/// CSV with header
/// problem,h,N,order,filtered,err_L1_u,err_Linf_u,err_L1_w,err_Linf_w,usage_fraction,wall_time
void emit_csv(const ConvergenceReport& report, std::ostream& out);
void emit_csv(const ConvergenceReport& report, const std::filesystem::path& path);

/// Writes one `h error` file per (norm, scheme) under `dir`, named
/// <norm>_<scheme>.dat, plus index.txt listing the series in CSV order.
void emit_plot_data(const ConvergenceReport& report, const std::filesystem::path& dir);

/// Observed orders as CSV: scheme,order,filtered,L1_u,Linf_u,L1_w,Linf_w.
void emit_orders(const ConvergenceReport& report, std::ostream& out);

}  // namespace hjsweep
