#include "erz/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace erz {

Grid::Grid(int dim, int points, double box_length) : dim_(dim), n_(points), length_(box_length) {
    if (dim < 1 || dim > kMaxDim)
        throw InvalidArgument("grid dimension must be 1 or 2, got " + std::to_string(dim));
    if (points < 8 || points % 2 != 0)
        throw InvalidArgument("points per axis must be even and >= 8, got " + std::to_string(points));
    if (!(box_length > 0.0) || !std::isfinite(box_length))
        throw InvalidArgument("box length must be positive and finite");
    size_ = 1;
    for (int a = 0; a < dim; ++a) size_ *= static_cast<std::size_t>(points);
}

double Grid::cell_volume() const { return std::pow(spacing(), dim_); }

double Grid::volume() const { return std::pow(length_, dim_); }

std::array<int, kMaxDim> Grid::unravel(std::size_t idx) const {
    std::array<int, kMaxDim> ijk{};
    for (int a = dim_ - 1; a >= 0; --a) {
        ijk[a] = static_cast<int>(idx % static_cast<std::size_t>(n_));
        idx /= static_cast<std::size_t>(n_);
    }
    return ijk;
}

std::size_t Grid::ravel(const std::array<int, kMaxDim>& ijk) const {
    std::size_t idx = 0;
    for (int a = 0; a < dim_; ++a) idx = idx * static_cast<std::size_t>(n_) + static_cast<std::size_t>(ijk[a]);
    return idx;
}

std::array<int, kMaxDim> Grid::mode(std::size_t idx) const {
    auto ijk = unravel(idx);
    for (int a = 0; a < dim_; ++a)
        if (ijk[a] >= n_ / 2) ijk[a] -= n_;
    return ijk;
}

std::size_t Grid::mode_index(const std::array<int, kMaxDim>& m) const {
    std::array<int, kMaxDim> ijk{};
    for (int a = 0; a < dim_; ++a) ijk[a] = ((m[a] % n_) + n_) % n_;
    return ravel(ijk);
}

std::array<double, kMaxDim> Grid::wavevector(std::size_t idx) const {
    auto m = mode(idx);
    std::array<double, kMaxDim> k{};
    for (int a = 0; a < dim_; ++a) k[a] = k0() * m[a];
    return k;
}

double Grid::wavenumber_sq(std::size_t idx) const {
    auto k = wavevector(idx);
    double s = 0.0;
    for (int a = 0; a < dim_; ++a) s += k[a] * k[a];
    return s;
}

double Grid::coordinate(std::size_t idx, int axis) const { return unravel(idx)[axis] * spacing(); }

Field::Field(const Grid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.size())
        throw InvalidArgument("field length " + std::to_string(values.size()) + " does not match grid size " +
                              std::to_string(grid.size()));
}

double Field::mean() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
}

double Field::min() const { return *std::min_element(values.begin(), values.end()); }

double Field::max() const { return *std::max_element(values.begin(), values.end()); }

double Field::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

bool Field::all_finite() const {
    return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

double Field::integral() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s * grid.cell_volume();
}

Field Field::sample(const Grid& g, const std::function<double(std::span<const double>)>& f) {
    Field out(g);
    std::array<double, kMaxDim> x{};
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (int a = 0; a < g.dim(); ++a) x[a] = g.coordinate(i, a);
        out.values[i] = f(std::span<const double>(x.data(), static_cast<std::size_t>(g.dim())));
    }
    return out;
}

void require_same_grid(const Grid& a, const Grid& b) {
    if (!(a == b)) throw GridMismatch();
}

namespace {

template <typename Op>
Field zip(const Field& a, const Field& b, Op op) {
    require_same_grid(a.grid, b.grid);
    Field out(a.grid);
    for (std::size_t i = 0; i < a.size(); ++i) out.values[i] = op(a.values[i], b.values[i]);
    return out;
}

}  // namespace

Field operator+(const Field& a, const Field& b) { return zip(a, b, std::plus<>()); }
Field operator-(const Field& a, const Field& b) { return zip(a, b, std::minus<>()); }
Field operator*(const Field& a, const Field& b) { return zip(a, b, std::multiplies<>()); }

Field operator*(double s, const Field& a) {
    Field out(a);
    for (double& v : out.values) v *= s;
    return out;
}

Field& operator+=(Field& a, const Field& b) {
    axpy(1.0, b, a);
    return a;
}

void axpy(double s, const Field& b, Field& a) {
    require_same_grid(a.grid, b.grid);
    for (std::size_t i = 0; i < a.size(); ++i) a.values[i] += s * b.values[i];
}

Field map(const Field& f, const std::function<double(double)>& fn) {
    Field out(f.grid);
    for (std::size_t i = 0; i < f.size(); ++i) out.values[i] = fn(f.values[i]);
    return out;
}

double inner(const Field& f, const Field& g) {
    require_same_grid(f.grid, g.grid);
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += f.values[i] * g.values[i];
    return s * f.grid.cell_volume();
}

double l2_norm(const Field& f) { return std::sqrt(inner(f, f)); }

}  // namespace erz
