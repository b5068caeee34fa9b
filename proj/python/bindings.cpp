#include "hjsweep/bench.hpp"
#include "hjsweep/fd_coeffs.hpp"
#include "hjsweep/grid.hpp"
#include "hjsweep/hj_solver.hpp"
#include "hjsweep/ranking.hpp"
#include "hjsweep/test_problems.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace hjsweep;

namespace {

// Stencils cross the boundary as lists of (offset, weight) pairs of
// fractions.Fraction so no precision is lost.
py::dict stencil_to_py(const Stencil& s) {
    static py::object fraction = py::module_::import("fractions").attr("Fraction");
    py::list offsets, weights;
    for (std::size_t i = 0; i < s.offsets.size(); ++i) {
        offsets.append(fraction(to_string(s.offsets[i])));
        weights.append(fraction(to_string(s.weights[i])));
    }
    py::dict d;
    d["offsets"] = offsets;
    d["weights"] = weights;
    d["derivative_order"] = s.derivative_order;
    d["accuracy_order"] = s.accuracy_order;
    return d;
}

Rational rational_from_py(const py::handle& v) { return parse_rational(py::str(v).cast<std::string>()); }

py::array_t<double> to_array(const GridFunction& g) {
    std::vector<py::ssize_t> shape(static_cast<std::size_t>(g.spec().dim()), g.spec().side());
    py::array_t<double> out(shape);
    std::copy(g.values().begin(), g.values().end(), out.mutable_data());
    return out;
}

GridFunction from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() < 1) throw std::invalid_argument("density must have at least one dimension");
    const auto side = a.shape(0);
    for (py::ssize_t i = 1; i < a.ndim(); ++i)
        if (a.shape(i) != side) throw std::invalid_argument("density must have equal sides");
    if (side < 2) throw std::invalid_argument("density needs at least two nodes per side");
    GridSpec spec(static_cast<int>(a.ndim()), side - 1);
    return GridFunction(spec, std::vector<double>(a.data(), a.data() + a.size()));
}

SchemeConfig make_config(int order, bool filtered, double threshold_exponent) {
    SchemeConfig cfg;
    cfg.order = order;
    cfg.filtered = filtered;
    cfg.threshold_exponent = threshold_exponent;
    return cfg;
}

std::vector<Point2> to_points(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 2 || a.shape(1) != 2) throw std::invalid_argument("points must have shape (M, 2)");
    std::vector<Point2> pts(static_cast<std::size_t>(a.shape(0)));
    for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = {a.data()[2 * i], a.data()[2 * i + 1]};
    return pts;
}

py::dict record_to_py(const ErrorRecord& r) {
    py::dict d;
    d["h"] = r.h;
    d["N"] = r.intervals;
    d["order"] = r.order;
    d["filtered"] = r.filtered;
    d["err_L1_u"] = r.err_L1_u;
    d["err_Linf_u"] = r.err_Linf_u;
    d["err_L1_w"] = r.err_L1_w;
    d["err_Linf_w"] = r.err_Linf_w;
    d["usage_fraction"] = r.usage_fraction;
    d["max_filter_residual"] = r.max_filter_residual;
    d["wall_time"] = r.wall_time;
    d["stable"] = r.stable;
    d["residual_ok"] = r.residual_ok;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Filtered upwind sweeping solver for the nondominated sorting continuum limit.";

    py::register_exception<ClosedFormMismatch>(m, "ClosedFormMismatch", PyExc_ArithmeticError);
    py::register_exception<InvariantFailure>(m, "InvariantFailure", PyExc_RuntimeError);
    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);

    m.def("backward_weights", [](int k) { return stencil_to_py(backward_weights(k)); }, py::arg("k"));
    m.def("forward_weights", [](int k) { return stencil_to_py(forward_weights(k)); }, py::arg("k"));
    m.def("centered_weights", [](int mm, int n) { return stencil_to_py(centered_weights(mm, n)); }, py::arg("m"),
          py::arg("n"));
    m.def(
        "arithmetic_weights",
        [](const py::object& a, const py::object& d, int n, int p) {
            const ArithmeticNodes spec{rational_from_py(a), rational_from_py(d), n};
            return stencil_to_py(p == 1 ? arithmetic_weights(spec) : derivative_weights(spec, p));
        },
        py::arg("a"), py::arg("d"), py::arg("n"), py::arg("p") = 1);
    m.def(
        "offset_weights",
        [](int mm, int n, const py::object& d, int p) {
            return stencil_to_py(derivative_weights(OffsetNodes{mm, n, rational_from_py(d)}, p));
        },
        py::arg("m"), py::arg("n"), py::arg("d") = 1, py::arg("p") = 1);
    m.def(
        "oracle_weights",
        [](const std::vector<py::object>& nodes, int p) {
            std::vector<Rational> r;
            for (const auto& v : nodes) r.push_back(rational_from_py(v));
            return stencil_to_py(oracle_weights(r, p));
        },
        py::arg("nodes"), py::arg("p"));

    m.def(
        "sweep_solve",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& density, int order, bool filtered,
           double threshold_exponent) {
            const auto f = from_array(density);
            const auto cfg = make_config(order, filtered, threshold_exponent);
            const SolveReport rep = [&] {
                py::gil_scoped_release release;
                return sweep_solve(f, cfg);
            }();
            py::dict d;
            d["w"] = to_array(rep.w);
            d["u"] = to_array(rep.u);
            py::array_t<bool> used(static_cast<py::ssize_t>(rep.high_order_used.size()));
            std::copy(rep.high_order_used.begin(), rep.high_order_used.end(), used.mutable_data());
            d["high_order_used"] = used.reshape(std::vector<py::ssize_t>(rep.w.spec().dim(), rep.w.spec().side()));
            d["usage_fraction"] = rep.usage_fraction;
            d["max_filter_residual"] = rep.max_filter_residual;
            return d;
        },
        py::arg("density"), py::arg("order") = 1, py::arg("filtered") = false, py::arg("threshold_exponent") = 0.5);

    m.def(
        "sample_problem",
        [](const std::string& name, std::int64_t n, const std::map<std::string, double>& params, int dim) {
            const auto p = problem_by_name(name, params, dim);
            py::dict d;
            d["density"] = to_array(GridFunction::sample(GridSpec(dim, n), p.density));
            if (p.exact_u) d["u"] = to_array(GridFunction::sample(GridSpec(dim, n), *p.exact_u));
            return d;
        },
        py::arg("name"), py::arg("n"), py::arg("params") = std::map<std::string, double>{}, py::arg("dim") = 2);
    m.def(
        "verify_residual",
        [](const std::string& name, std::size_t count, std::uint64_t seed, const std::map<std::string, double>& params) {
            const auto p = problem_by_name(name, params);
            const auto r = verify_residual(p, sample_points(p, count, seed));
            return py::make_tuple(r.passed, r.max_residual);
        },
        py::arg("name"), py::arg("count") = 200, py::arg("seed") = 0,
        py::arg("params") = std::map<std::string, double>{});

    m.def("observed_order", &observed_order, py::arg("h"), py::arg("err"));
    m.def(
        "run_study",
        [](const std::string& name, const std::vector<int>& orders, const std::vector<bool>& filtered,
           const std::vector<std::int64_t>& meshes, const std::map<std::string, double>& params) {
            StudyOptions opts;
            opts.orders = orders;
            opts.filtered = filtered;
            opts.meshes = meshes;
            const auto problem = problem_by_name(name, params);
            const ConvergenceReport rep = [&] {
                py::gil_scoped_release release;
                return run_study(problem, opts);
            }();
            py::list records;
            for (const auto& r : rep.records) records.append(record_to_py(r));
            py::dict orders_out;
            for (const auto& [key, o] : rep.observed_orders)
                orders_out[py::str(scheme_label(key))] = py::dict(py::arg("L1_u") = o.L1_u, py::arg("Linf_u") = o.Linf_u,
                                                                  py::arg("L1_w") = o.L1_w, py::arg("Linf_w") = o.Linf_w);
            py::dict d;
            d["records"] = records;
            d["observed_orders"] = orders_out;
            d["structural_invariants_hold"] = rep.structural_invariants_hold();
            return d;
        },
        py::arg("problem"), py::arg("orders") = std::vector<int>{1, 2, 3, 5, 8, 13},
        py::arg("filtered") = std::vector<bool>{false, true},
        py::arg("meshes") = std::vector<std::int64_t>{32, 64, 128, 256, 512, 1024},
        py::arg("params") = std::map<std::string, double>{});

    m.def(
        "pareto_peel",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& pts) {
            return pareto_peel(to_points(pts));
        },
        py::arg("points"));
    m.def("compare_rankings", &compare_rankings, py::arg("a"), py::arg("b"));
    m.def(
        "rank",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& pts, std::int64_t n, int order,
           int smoothing, double threshold_exponent) {
            const auto cloud = PointCloud::from_raw(to_points(pts));
            const auto r = rank_points(cloud, GridSpec(2, n), make_config(order, true, threshold_exponent), smoothing);
            py::dict d;
            d["pde_rank"] = py::array_t<double>(static_cast<py::ssize_t>(r.pde_rank.size()), r.pde_rank.data());
            d["exact_layer"] = py::array_t<int>(static_cast<py::ssize_t>(r.exact_layer.size()), r.exact_layer.data());
            d["agreement"] = r.agreement;
            return d;
        },
        py::arg("points"), py::arg("n") = 128, py::arg("order") = 2, py::arg("smoothing") = 1,
        py::arg("threshold_exponent") = 0.5);
}
