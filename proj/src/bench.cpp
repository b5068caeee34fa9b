#include "hjsweep/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace hjsweep {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
    if (!std::isfinite(v)) return "inf";
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

struct ErrorPair {
    double l1 = 0.0;
    double linf = 0.0;
};

/// Errors over nodes with every coordinate positive (w is only defined by
/// limits on the faces).
ErrorPair interior_w_error(const GridFunction& w, const TestProblem& p) {
    const GridSpec& spec = w.spec();
    const double cell = std::pow(spec.h(), spec.dim());
    ErrorPair e;
    std::vector<double> x(static_cast<std::size_t>(spec.dim()));
    std::size_t linear = 0;
    for (const auto& j : sweep_order(spec)) {
        const bool interior = std::all_of(j.begin(), j.end(), [](auto c) { return c > 0; });
        if (interior) {
            for (std::size_t a = 0; a < x.size(); ++a) x[a] = static_cast<double>(j[a]) * spec.h();
            const double diff = std::abs(w[linear] - p.exact_w(x));
            if (!std::isfinite(diff)) return {kInf, kInf};
            e.l1 += cell * diff;
            e.linf = std::max(e.linf, diff);
        }
        ++linear;
    }
    return e;
}

}  // namespace

double discrete_error(const GridFunction& approx, const PointFunction& exact, Norm norm) {
    const GridSpec& spec = approx.spec();
    const double cell = std::pow(spec.h(), spec.dim());
    std::vector<double> x(static_cast<std::size_t>(spec.dim()));
    double l1 = 0.0;
    double linf = 0.0;
    std::size_t linear = 0;
    for (const auto& j : sweep_order(spec)) {
        for (std::size_t a = 0; a < x.size(); ++a) x[a] = static_cast<double>(j[a]) * spec.h();
        const double diff = std::abs(approx[linear] - exact(x));
        if (!std::isfinite(diff)) return kInf;
        l1 += diff;
        linf = std::max(linf, diff);
        ++linear;
    }
    return norm == Norm::L1 ? cell * l1 : linf;
}

std::string scheme_label(const SchemeKey& key) {
    return "order" + std::to_string(key.order) + (key.filtered ? "-filtered" : "");
}

std::vector<ErrorRecord> ConvergenceReport::series(const SchemeKey& key) const {
    std::vector<ErrorRecord> out;
    for (const auto& r : records)
        if (r.order == key.order && r.filtered == key.filtered) out.push_back(r);
    return out;
}

bool ConvergenceReport::structural_invariants_hold() const {
    return std::all_of(records.begin(), records.end(), [](const ErrorRecord& r) {
        if (!r.filtered && r.order != 1) return true;
        return r.stable && r.residual_ok;
    });
}

double observed_order(const std::vector<double>& h, const std::vector<double>& err) {
    if (h.size() != err.size()) throw std::invalid_argument("observed_order: length mismatch");
    std::vector<double> sorted_h = h;
    std::sort(sorted_h.begin(), sorted_h.end());
    if (std::adjacent_find(sorted_h.begin(), sorted_h.end()) != sorted_h.end())
        throw std::invalid_argument("observed_order: mesh sizes must be distinct");
    if (h.size() < 3) throw std::invalid_argument("observed_order: need at least three mesh levels");
    for (std::size_t i = 0; i < h.size(); ++i)
        if (!(h[i] > 0.0) || !std::isfinite(err[i]) || !(err[i] > 0.0)) return std::numeric_limits<double>::quiet_NaN();

    const auto n = static_cast<double>(h.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        const double lx = std::log(h[i]);
        const double ly = std::log(err[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ConvergenceReport run_study(const TestProblem& problem, const StudyOptions& opts) {
    if (!problem.exact_u) throw std::invalid_argument("run_study: problem '" + problem.name + "' has no exact solution");
    ConvergenceReport report;
    report.problem = problem.name;

    for (const auto intervals : opts.meshes) {
        const GridSpec spec(problem.dim, intervals);
        const GridFunction f = GridFunction::sample(spec, problem.density);
        for (const int order : opts.orders) {
            for (const bool filtered : opts.filtered) {
                SchemeConfig cfg = opts.base;
                cfg.order = order;
                cfg.filtered = filtered;

                const auto start = std::chrono::steady_clock::now();
                const SolveReport solved = sweep_solve(f, cfg);
                const auto stop = std::chrono::steady_clock::now();

                ErrorRecord rec;
                rec.h = spec.h();
                rec.intervals = intervals;
                rec.order = order;
                rec.filtered = filtered;
                rec.err_L1_u = discrete_error(solved.u, *problem.exact_u, Norm::L1);
                rec.err_Linf_u = discrete_error(solved.u, *problem.exact_u, Norm::Linf);
                const auto we = interior_w_error(solved.w, problem);
                rec.err_L1_w = we.l1;
                rec.err_Linf_w = we.linf;
                rec.usage_fraction = solved.usage_fraction;
                rec.max_filter_residual = solved.max_filter_residual;
                rec.wall_time = opts.record_timing ? std::chrono::duration<double>(stop - start).count() : 0.0;
                if (filtered || order == 1) {
                    rec.stable = stability_check(solved, f);
                    rec.residual_ok = filter_residual(solved.w, f) <= cfg.threshold(spec.h());
                }
                report.records.push_back(rec);
            }
        }
    }

    std::stable_sort(report.records.begin(), report.records.end(), [](const ErrorRecord& a, const ErrorRecord& b) {
        if (a.h != b.h) return a.h > b.h;
        if (a.order != b.order) return a.order < b.order;
        return a.filtered < b.filtered;
    });

    std::map<SchemeKey, std::vector<const ErrorRecord*>> by_scheme;
    for (const auto& r : report.records) by_scheme[{r.order, r.filtered}].push_back(&r);
    for (const auto& [key, recs] : by_scheme) {
        if (recs.size() < 3) continue;
        std::vector<double> h, l1u, liu, l1w, liw;
        for (const auto* r : recs) {
            h.push_back(r->h);
            l1u.push_back(r->err_L1_u);
            liu.push_back(r->err_Linf_u);
            l1w.push_back(r->err_L1_w);
            liw.push_back(r->err_Linf_w);
        }
        report.observed_orders[key] = {observed_order(h, l1u), observed_order(h, liu), observed_order(h, l1w),
                                       observed_order(h, liw)};
    }
    return report;
}

void emit_csv(const ConvergenceReport& report, std::ostream& out) {
    out << "problem,h,N,order,filtered,err_L1_u,err_Linf_u,err_L1_w,err_Linf_w,usage_fraction,wall_time\n";
    for (const auto& r : report.records) {
        out << report.problem << ',' << fmt(r.h) << ',' << r.intervals << ',' << r.order << ','
            << (r.filtered ? 1 : 0) << ',' << fmt(r.err_L1_u) << ',' << fmt(r.err_Linf_u) << ',' << fmt(r.err_L1_w)
            << ',' << fmt(r.err_Linf_w) << ',' << fmt(r.usage_fraction) << ',' << fmt(r.wall_time) << '\n';
    }
    if (!out) throw std::runtime_error("emit_csv: write failed");
}

void emit_csv(const ConvergenceReport& report, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    emit_csv(report, out);
}

void emit_plot_data(const ConvergenceReport& report, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    // Schemes in order of first appearance in the CSV.
    std::vector<SchemeKey> schemes;
    for (const auto& r : report.records) {
        const SchemeKey key{r.order, r.filtered};
        if (std::find(schemes.begin(), schemes.end(), key) == schemes.end()) schemes.push_back(key);
    }
    struct Column {
        const char* name;
        double ErrorRecord::*field;
    };
    const Column columns[] = {{"L1_u", &ErrorRecord::err_L1_u},
                              {"Linf_u", &ErrorRecord::err_Linf_u},
                              {"L1_w", &ErrorRecord::err_L1_w},
                              {"Linf_w", &ErrorRecord::err_Linf_w}};

    std::ofstream index(dir / "index.txt");
    if (!index) throw std::runtime_error("cannot write plot index in " + dir.string());
    for (const auto& key : schemes) {
        for (const auto& col : columns) {
            const std::string name = std::string(col.name) + "_" + scheme_label(key);
            std::ofstream data(dir / (name + ".dat"));
            if (!data) throw std::runtime_error("cannot write " + name + ".dat");
            data << "# h error\n";
            for (const auto& r : report.series(key)) data << fmt(r.h) << ' ' << fmt(r.*(col.field)) << '\n';
            index << name << '\n';
        }
    }
}

void emit_orders(const ConvergenceReport& report, std::ostream& out) {
    out << "scheme,order,filtered,L1_u,Linf_u,L1_w,Linf_w\n";
    auto num = [](double v) { return std::isnan(v) ? std::string("nan") : fmt(v); };
    for (const auto& [key, o] : report.observed_orders)
        out << scheme_label(key) << ',' << key.order << ',' << (key.filtered ? 1 : 0) << ',' << num(o.L1_u) << ','
            << num(o.Linf_u) << ',' << num(o.L1_w) << ',' << num(o.Linf_w) << '\n';
}

}  // namespace hjsweep
