#include "hjsweep/grid.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace hjsweep {

GridSpec::GridSpec(int dim, std::int64_t intervals)
    : dim_(dim), intervals_(intervals), h_(0.0), node_count_(1) {
    if (dim < 1) throw std::invalid_argument("GridSpec: dimension must be positive");
    if (intervals < 1) throw std::invalid_argument("GridSpec: interval count must be positive");
    h_ = 1.0 / static_cast<double>(intervals);
    strides_.assign(static_cast<std::size_t>(dim), 1);
    const auto side_sz = static_cast<std::size_t>(intervals + 1);
    for (int a = dim - 1; a >= 0; --a) {
        strides_[static_cast<std::size_t>(a)] = node_count_;
        if (node_count_ > std::numeric_limits<std::size_t>::max() / side_sz)
            throw std::invalid_argument("GridSpec: node count overflows");
        node_count_ *= side_sz;
    }
}

bool in_range(const GridSpec& spec, std::span<const std::int64_t> j) {
    if (j.size() != static_cast<std::size_t>(spec.dim())) return false;
    for (auto c : j)
        if (c < 0 || c > spec.intervals()) return false;
    return true;
}

std::size_t linear_index(const GridSpec& spec, std::span<const std::int64_t> j) {
    std::size_t idx = 0;
    for (int a = 0; a < spec.dim(); ++a) idx += static_cast<std::size_t>(j[static_cast<std::size_t>(a)]) * spec.stride(a);
    return idx;
}

MultiIndex multi_index(const GridSpec& spec, std::size_t linear) {
    MultiIndex j(static_cast<std::size_t>(spec.dim()));
    for (int a = 0; a < spec.dim(); ++a) {
        j[static_cast<std::size_t>(a)] = static_cast<std::int64_t>(linear / spec.stride(a));
        linear %= spec.stride(a);
    }
    return j;
}

std::vector<double> coordinates(const GridSpec& spec, std::span<const std::int64_t> j) {
    if (!in_range(spec, j)) throw std::invalid_argument("coordinates: index out of range");
    std::vector<double> x(j.size());
    for (std::size_t a = 0; a < j.size(); ++a) x[a] = static_cast<double>(j[a]) * spec.h();
    return x;
}

MultiIndex nearest_index(const GridSpec& spec, std::span<const double> x) {
    if (x.size() != static_cast<std::size_t>(spec.dim())) throw std::invalid_argument("nearest_index: dimension mismatch");
    MultiIndex j(x.size());
    for (std::size_t a = 0; a < x.size(); ++a) {
        const auto r = static_cast<std::int64_t>(std::llround(x[a] * static_cast<double>(spec.intervals())));
        j[a] = std::clamp<std::int64_t>(r, 0, spec.intervals());
    }
    return j;
}

bool in_filter_band(const GridSpec& spec, std::span<const std::int64_t> j, int k) {
    (void)spec;
    for (auto c : j)
        if (c < k) return false;
    return true;
}

// Sweep order -----------------------------------------------------------------

SweepOrder::iterator& SweepOrder::iterator::operator++() {
    for (std::size_t a = current_.size(); a-- > 0;) {
        if (++current_[a] <= last_) return *this;
        current_[a] = 0;
    }
    done_ = true;
    return *this;
}

SweepOrder::iterator SweepOrder::begin() const {
    return iterator(spec_.intervals(), MultiIndex(static_cast<std::size_t>(spec_.dim()), 0), false);
}

// GridFunction ------------------------------------------------------------------

GridFunction::GridFunction(GridSpec spec, double fill) : spec_(std::move(spec)), values_(spec_.node_count(), fill) {}

GridFunction::GridFunction(GridSpec spec, std::vector<double> values) : spec_(std::move(spec)), values_(std::move(values)) {
    if (values_.size() != spec_.node_count())
        throw std::invalid_argument("GridFunction: expected " + std::to_string(spec_.node_count()) + " values, got " +
                                    std::to_string(values_.size()));
}

double GridFunction::read_extended(std::span<const std::int64_t> j) const {
    if (!in_range(spec_, j)) return 0.0;
    return values_[linear_index(spec_, j)];
}

// Serialization -----------------------------------------------------------------

namespace {

void put_u64(std::ostream& out, std::uint64_t v) {
    std::array<char, 8> bytes{};
    for (std::size_t i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
    out.write(bytes.data(), bytes.size());
}

std::uint64_t get_u64(std::istream& in) {
    std::array<unsigned char, 8> bytes{};
    in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
    if (!in) throw std::runtime_error("grid binary: truncated input");
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
    return v;
}

}  // namespace

void write_binary(const GridFunction& g, std::ostream& out) {
    put_u64(out, static_cast<std::uint64_t>(g.spec().dim()));
    put_u64(out, static_cast<std::uint64_t>(g.spec().intervals()));
    for (double v : g.values()) put_u64(out, std::bit_cast<std::uint64_t>(v));
    if (!out) throw std::runtime_error("grid binary: write failed");
}

GridFunction read_binary(std::istream& in) {
    const auto dim = get_u64(in);
    const auto intervals = get_u64(in);
    if (dim == 0 || dim > 16 || intervals == 0 || intervals > (1u << 30))
        throw std::runtime_error("grid binary: implausible header");
    GridSpec spec(static_cast<int>(dim), static_cast<std::int64_t>(intervals));
    std::vector<double> values(spec.node_count());
    for (auto& v : values) v = std::bit_cast<double>(get_u64(in));
    return GridFunction(spec, std::move(values));
}

void write_binary(const GridFunction& g, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_binary(g, out);
}

GridFunction read_binary(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return read_binary(in);
}

void write_csv(const GridFunction& g, std::ostream& out) {
    const auto old_precision = out.precision(17);
    std::size_t linear = 0;
    for (const auto& j : sweep_order(g.spec())) {
        for (auto c : j) out << c << ',';
        out << g[linear++] << '\n';
    }
    out.precision(old_precision);
    if (!out) throw std::runtime_error("grid csv: write failed");
}

void write_csv(const GridFunction& g, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_csv(g, out);
}

}  // namespace hjsweep
