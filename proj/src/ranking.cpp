#include "hjsweep/ranking.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <string>
#include <string_view>

namespace hjsweep {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_cell(std::string_view cell, std::size_t row) {
    cell = trim(cell);
    double v = 0.0;
    if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size())
        throw InputError("row " + std::to_string(row) + ": not a number: '" + std::string(cell) + "'", row);
    if (!std::isfinite(v)) throw InputError("row " + std::to_string(row) + ": non-finite value", row);
    return v;
}

std::int64_t cell_of(double x, std::int64_t n) {
    const auto c = static_cast<std::int64_t>(std::floor(x * static_cast<double>(n)));
    return std::clamp<std::int64_t>(c, 0, n - 1);
}

std::vector<double> average_ranks(const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t t = i; t <= j; ++t) ranks[idx[t]] = r;
        i = j + 1;
    }
    return ranks;
}

bool dominates(const Point2& p, const Point2& q) {
    return p[0] <= q[0] && p[1] <= q[1] && (p[0] < q[0] || p[1] < q[1]);
}

}  // namespace

InputError::InputError(const std::string& what, std::size_t row) : std::invalid_argument(what), row_(row) {}

Point2 PointCloud::raw(std::size_t i) const {
    return {offset[0] + scale[0] * points[i][0], offset[1] + scale[1] * points[i][1]};
}

PointCloud PointCloud::from_raw(const std::vector<Point2>& raw) {
    if (raw.size() < 2) throw InputError("need at least 2 points, got " + std::to_string(raw.size()), 0);
    PointCloud cloud;
    for (std::size_t a = 0; a < 2; ++a) {
        double lo = raw[0][a], hi = raw[0][a];
        for (const auto& p : raw) {
            if (!std::isfinite(p[a])) throw InputError("non-finite coordinate", 0);
            lo = std::min(lo, p[a]);
            hi = std::max(hi, p[a]);
        }
        if (!(hi > lo)) throw InputError("zero range on axis x" + std::to_string(a + 1), 0);
        cloud.offset[a] = lo;
        cloud.scale[a] = hi - lo;
    }
    cloud.points.reserve(raw.size());
    for (const auto& p : raw) {
        Point2 q{};
        for (std::size_t a = 0; a < 2; ++a) q[a] = std::clamp((p[a] - cloud.offset[a]) / cloud.scale[a], 0.0, 1.0);
        cloud.points.push_back(q);
    }
    return cloud;
}

PointCloud load_points(std::istream& in) {
    std::vector<Point2> raw;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        const auto s = trim(line);
        if (s.empty()) continue;
        if (raw.empty() && s == "x1,x2") continue;
        const auto comma = s.find(',');
        if (comma == std::string_view::npos || s.find(',', comma + 1) != std::string_view::npos)
            throw InputError("row " + std::to_string(row) + ": expected two comma-separated values", row);
        raw.push_back({parse_cell(s.substr(0, comma), row), parse_cell(s.substr(comma + 1), row)});
    }
    return PointCloud::from_raw(raw);
}

PointCloud load_points(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return load_points(in);
}

double histogram_mass(const PointCloud& cloud, const GridSpec& spec) {
    const auto n = spec.intervals();
    std::vector<double> cells(static_cast<std::size_t>(n * n), 0.0);
    const double unit = 1.0 / (static_cast<double>(cloud.size()) * spec.h() * spec.h());
    for (const auto& p : cloud.points) cells[static_cast<std::size_t>(cell_of(p[0], n) * n + cell_of(p[1], n))] += unit;
    double mass = 0.0;
    for (double c : cells) mass += c;
    return mass * spec.h() * spec.h();
}

GridFunction estimate_density(const PointCloud& cloud, const GridSpec& spec, int passes) {
    if (spec.dim() != 2) throw std::invalid_argument("estimate_density: grid must be 2-D");
    if (passes < 0) throw std::invalid_argument("estimate_density: smoothing passes must be non-negative");
    const auto n = spec.intervals();
    std::vector<double> cells(static_cast<std::size_t>(n * n), 0.0);
    const double unit = 1.0 / (static_cast<double>(cloud.size()) * spec.h() * spec.h());
    for (const auto& p : cloud.points) cells[static_cast<std::size_t>(cell_of(p[0], n) * n + cell_of(p[1], n))] += unit;

    GridFunction g(spec);
    for (std::int64_t i = 0; i <= n; ++i) {
        for (std::int64_t j = 0; j <= n; ++j) {
            double sum = 0.0;
            int count = 0;
            for (std::int64_t ci = i - 1; ci <= i; ++ci)
                for (std::int64_t cj = j - 1; cj <= j; ++cj)
                    if (ci >= 0 && ci < n && cj >= 0 && cj < n) {
                        sum += cells[static_cast<std::size_t>(ci * n + cj)];
                        ++count;
                    }
            g[static_cast<std::size_t>(i * (n + 1) + j)] = sum / count;
        }
    }

    for (int pass = 0; pass < passes; ++pass) {
        GridFunction next(spec);
        for (std::int64_t i = 0; i <= n; ++i) {
            for (std::int64_t j = 0; j <= n; ++j) {
                double sum = 0.0;
                int count = 0;
                for (std::int64_t a = std::max<std::int64_t>(i - 1, 0); a <= std::min(i + 1, n); ++a)
                    for (std::int64_t b = std::max<std::int64_t>(j - 1, 0); b <= std::min(j + 1, n); ++b) {
                        sum += g[static_cast<std::size_t>(a * (n + 1) + b)];
                        ++count;
                    }
                next[static_cast<std::size_t>(i * (n + 1) + j)] = sum / count;
            }
        }
        g = std::move(next);
    }
    return g;
}

double interpolate(const GridFunction& g, const Point2& x) {
    const GridSpec& spec = g.spec();
    if (spec.dim() != 2) throw std::invalid_argument("interpolate: grid must be 2-D");
    const auto n = spec.intervals();
    const double nd = static_cast<double>(n);
    std::array<std::int64_t, 2> base{};
    std::array<double, 2> t{};
    for (std::size_t a = 0; a < 2; ++a) {
        const double s = std::clamp(x[a], 0.0, 1.0) * nd;
        base[a] = std::min<std::int64_t>(static_cast<std::int64_t>(std::floor(s)), n - 1);
        t[a] = s - static_cast<double>(base[a]);
    }
    auto at = [&](std::int64_t i, std::int64_t j) { return g[static_cast<std::size_t>(i * (n + 1) + j)]; };
    const auto i = base[0], j = base[1];
    return (1 - t[0]) * ((1 - t[1]) * at(i, j) + t[1] * at(i, j + 1)) +
           t[0] * ((1 - t[1]) * at(i + 1, j) + t[1] * at(i + 1, j + 1));
}

std::vector<double> pde_rank(const std::vector<Point2>& points, const GridFunction& density, SchemeConfig cfg) {
    cfg.filtered = true;
    const SolveReport solved = sweep_solve(density, cfg);
    std::vector<double> ranks;
    ranks.reserve(points.size());
    for (const auto& p : points) ranks.push_back(interpolate(solved.u, p));
    return ranks;
}

std::vector<double> pde_rank(const PointCloud& cloud, const GridSpec& spec, SchemeConfig cfg, int passes) {
    return pde_rank(cloud.points, estimate_density(cloud, spec, passes), cfg);
}

std::vector<int> pareto_peel(const std::vector<Point2>& points) {
    std::vector<std::size_t> idx(points.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });

    // Every earlier point in this order has x1 <= q1, so it dominates q
    // exactly when its x2 <= q2 (equal points handled as a group). The
    // per-layer minimum x2 is nondecreasing in the layer index.
    std::vector<double> layer_min;
    std::vector<int> layer(points.size(), 0);
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t end = i + 1;
        while (end < idx.size() && points[idx[end]] == points[idx[i]]) ++end;
        const double q2 = points[idx[i]][1];
        const auto it = std::upper_bound(layer_min.begin(), layer_min.end(), q2);
        const auto l = static_cast<std::size_t>(it - layer_min.begin());
        if (it == layer_min.end())
            layer_min.push_back(q2);
        else
            *it = q2;
        for (std::size_t t = i; t < end; ++t) layer[idx[t]] = static_cast<int>(l) + 1;
        i = end;
    }
    return layer;
}

std::vector<int> pareto_peel_naive(const std::vector<Point2>& points) {
    std::vector<int> layer(points.size(), 0);
    std::vector<std::size_t> remaining(points.size());
    std::iota(remaining.begin(), remaining.end(), std::size_t{0});
    for (int current = 1; !remaining.empty(); ++current) {
        std::vector<std::size_t> rest;
        for (const auto q : remaining) {
            const bool dominated = std::any_of(remaining.begin(), remaining.end(),
                                               [&](std::size_t p) { return dominates(points[p], points[q]); });
            if (dominated)
                rest.push_back(q);
            else
                layer[q] = current;
        }
        remaining = std::move(rest);
    }
    return layer;
}

double compare_rankings(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("compare_rankings: length mismatch (" + std::to_string(a.size()) + " vs " +
                                    std::to_string(b.size()) + ")");
    const auto n = a.size();
    if (n < 2) return std::nan("");
    const auto ra = average_ranks(a);
    const auto rb = average_ranks(b);
    const double mean = 0.5 * static_cast<double>(n + 1);
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sab += (ra[i] - mean) * (rb[i] - mean);
        saa += (ra[i] - mean) * (ra[i] - mean);
        sbb += (rb[i] - mean) * (rb[i] - mean);
    }
    if (saa == 0.0 || sbb == 0.0) return std::nan("");
    return sab / std::sqrt(saa * sbb);
}

RankResult rank_points(const PointCloud& cloud, const GridSpec& spec, const SchemeConfig& cfg, int passes) {
    RankResult r;
    r.pde_rank = pde_rank(cloud, spec, cfg, passes);
    r.exact_layer = pareto_peel(cloud.points);
    std::vector<double> layers(r.exact_layer.begin(), r.exact_layer.end());
    r.agreement = compare_rankings(r.pde_rank, layers);
    return r;
}

}  // namespace hjsweep
