#pragma once

// Continuum ranking of 2-D point clouds: estimate the data density on a
// grid, solve for u, read each point's rank off u. Exact nondominated
// sorting by peeling minimal points is provided for comparison.

#include "hjsweep/grid.hpp"
#include "hjsweep/hj_solver.hpp"

#include <array>
#include <filesystem>
#include <istream>
#include <stdexcept>
#include <vector>

namespace hjsweep {

using Point2 = std::array<double, 2>;

/// Rejected ingestion input. row() is the 1-based line number, 0 when the
/// problem is not tied to a line.
class InputError : public std::invalid_argument {
public:
    InputError(const std::string& what, std::size_t row);
    std::size_t row() const { return row_; }

private:
    std::size_t row_;
};

struct PointCloud {
    /// Coordinates after the per-axis affine map onto [0,1].
    std::vector<Point2> points;
    /// raw = offset + scale * normalized, per axis.
    Point2 offset{0.0, 0.0};
    Point2 scale{1.0, 1.0};

    std::size_t size() const { return points.size(); }
    Point2 raw(std::size_t i) const;

    /// Normalizes `raw`. Throws InputError for M < 2, non-finite values or a
    /// zero range on either axis.
    static PointCloud from_raw(const std::vector<Point2>& raw);
};

/// CSV rows `x1,x2`, with an optional `x1,x2` header line. Blank lines are
/// skipped.
PointCloud load_points(std::istream& in);
PointCloud load_points(const std::filesystem::path& path);

/// Cell histogram count / (M h^2) on the N x N cells of `spec`, moved to the
/// nodes by averaging the in-range cells touching each node, then smoothed
/// `passes` times with a 3x3 mean over in-range nodes. Requires a 2-D spec.
GridFunction estimate_density(const PointCloud& cloud, const GridSpec& spec, int passes);

/// Sum of cell values times h^2 of the unsmoothed histogram; 1 up to rounding.
double histogram_mass(const PointCloud& cloud, const GridSpec& spec);

/// Bilinear interpolation of a 2-D grid function at x in [0,1]^2.
double interpolate(const GridFunction& g, const Point2& x);

/// Filtered solve (cfg.filtered is forced on) on the estimated density,
/// u_h at each point by bilinear interpolation.
std::vector<double> pde_rank(const PointCloud& cloud, const GridSpec& spec, SchemeConfig cfg, int passes = 0);

/// Same, on a caller-supplied density.
std::vector<double> pde_rank(const std::vector<Point2>& points, const GridFunction& density, SchemeConfig cfg);

/// Layer index (1 = minimal points) by peeling minimal elements. Equal
/// points share a layer. O(M log M).
std::vector<int> pareto_peel(const std::vector<Point2>& points);

/// Repeated removal of minimal elements by pairwise comparison.
std::vector<int> pareto_peel_naive(const std::vector<Point2>& points);

/// Spearman correlation with average ranks for ties. Throws
/// std::invalid_argument on length mismatch; NaN when either side is constant
/// or fewer than two values are given.
double compare_rankings(const std::vector<double>& a, const std::vector<double>& b);

struct RankResult {
    std::vector<double> pde_rank;
    std::vector<int> exact_layer;
    double agreement = 0.0;
};

RankResult rank_points(const PointCloud& cloud, const GridSpec& spec, const SchemeConfig& cfg, int passes = 0);

}  // namespace hjsweep
