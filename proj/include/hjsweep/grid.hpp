#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <iterator>
#include <span>
#include <vector>

namespace hjsweep {

/// Uniform lattice on [0,1]^dim with `intervals` cells per axis.
class GridSpec {
public:
    GridSpec(int dim, std::int64_t intervals);

    int dim() const { return dim_; }
    std::int64_t intervals() const { return intervals_; }
    double h() const { return h_; }
    /// Nodes per axis, intervals + 1.
    std::int64_t side() const { return intervals_ + 1; }
    std::size_t node_count() const { return node_count_; }
    /// Row-major stride of `axis`; the last axis is contiguous.
    std::size_t stride(int axis) const { return strides_[static_cast<std::size_t>(axis)]; }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;

private:
    int dim_;
    std::int64_t intervals_;
    double h_;
    std::size_t node_count_;
    std::vector<std::size_t> strides_;
};

using MultiIndex = std::vector<std::int64_t>;

bool in_range(const GridSpec& spec, std::span<const std::int64_t> j);
std::size_t linear_index(const GridSpec& spec, std::span<const std::int64_t> j);
MultiIndex multi_index(const GridSpec& spec, std::size_t linear);

/// (j_1 h, ..., j_n h). Throws std::invalid_argument when j is out of range.
std::vector<double> coordinates(const GridSpec& spec, std::span<const std::int64_t> j);

/// Nearest node to a point of [0,1]^n.
MultiIndex nearest_index(const GridSpec& spec, std::span<const double> x);

/// True iff j_i >= k on every axis.
bool in_filter_band(const GridSpec& spec, std::span<const std::int64_t> j, int k);

/// Row-major traversal of all nodes. Every node is visited after all nodes
/// obtained by decrementing one of its coordinates.
class SweepOrder {
public:
    class iterator {
    public:
        using value_type = MultiIndex;
        using difference_type = std::ptrdiff_t;
        using reference = const MultiIndex&;
        using pointer = const MultiIndex*;
        using iterator_category = std::input_iterator_tag;

        iterator() = default;
        reference operator*() const { return current_; }
        pointer operator->() const { return &current_; }
        iterator& operator++();
        iterator operator++(int) {
            auto copy = *this;
            ++*this;
            return copy;
        }
        friend bool operator==(const iterator& a, const iterator& b) { return a.done_ == b.done_ && (a.done_ || a.current_ == b.current_); }

    private:
        friend class SweepOrder;
        iterator(std::int64_t last, MultiIndex start, bool done)
            : last_(last), current_(std::move(start)), done_(done) {}

        std::int64_t last_ = 0;
        MultiIndex current_;
        bool done_ = true;
    };

    explicit SweepOrder(const GridSpec& spec) : spec_(spec) {}
    iterator begin() const;
    iterator end() const { return {}; }

private:
    GridSpec spec_;
};

inline SweepOrder sweep_order(const GridSpec& spec) { return SweepOrder(spec); }

/// Scalar field on the nodes of a GridSpec, stored densely in row-major order.
class GridFunction {
public:
    explicit GridFunction(GridSpec spec, double fill = 0.0);
    GridFunction(GridSpec spec, std::vector<double> values);

    const GridSpec& spec() const { return spec_; }
    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }

    double& operator[](std::size_t linear) { return values_[linear]; }
    double operator[](std::size_t linear) const { return values_[linear]; }

    double at(std::span<const std::int64_t> j) const { return values_[linear_index(spec_, j)]; }
    void set(std::span<const std::int64_t> j, double v) { values_[linear_index(spec_, j)] = v; }

    /// Stored value inside the cube, 0 for any index outside {0..N}^n.
    double read_extended(std::span<const std::int64_t> j) const;

    /// Samples `f` (callable on std::span<const double>) at every node.
    template <class F>
    static GridFunction sample(const GridSpec& spec, F&& f) {
        GridFunction g(spec);
        std::vector<double> x(static_cast<std::size_t>(spec.dim()));
        std::size_t linear = 0;
        for (const auto& j : sweep_order(spec)) {
            for (std::size_t a = 0; a < x.size(); ++a) x[a] = static_cast<double>(j[a]) * spec.h();
            g.values_[linear++] = f(std::span<const double>(x));
        }
        return g;
    }

private:
    GridSpec spec_;
    std::vector<double> values_;
};

inline double read_extended(const GridFunction& w, std::span<const std::int64_t> j) { return w.read_extended(j); }

// Serialization. Binary layout: dim and N as little-endian uint64, then the
// (N+1)^dim values as little-endian IEEE-754 doubles in row-major order.

void write_binary(const GridFunction& g, std::ostream& out);
GridFunction read_binary(std::istream& in);
void write_binary(const GridFunction& g, const std::filesystem::path& path);
GridFunction read_binary(const std::filesystem::path& path);

/// One row per node: `j1,...,jn,value`.
void write_csv(const GridFunction& g, std::ostream& out);
void write_csv(const GridFunction& g, const std::filesystem::path& path);

}  // namespace hjsweep
