#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "erz/errors.hpp"

namespace erz {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr int kMaxDim = 2;

/// Uniform periodic grid on the box [0, L)^d with n points per axis.
///
/// Samples are stored row-major (axis 0 slowest). Fourier indices follow the
/// FFT convention: index i maps to the signed mode i for i < n/2 and i - n
/// otherwise, so the Nyquist index n/2 is the mode -n/2.
class Grid {
  public:
    Grid(int dim, int points, double box_length);

    int dim() const { return dim_; }
    int points() const { return n_; }
    double box_length() const { return length_; }
    double spacing() const { return length_ / n_; }
    double cell_volume() const;
    double volume() const;
    std::size_t size() const { return size_; }

    /// Fundamental wavenumber 2*pi/L.
    double k0() const { return 2.0 * kPi / length_; }

    /// Per-axis integer indices of a linear index.
    std::array<int, kMaxDim> unravel(std::size_t idx) const;
    std::size_t ravel(const std::array<int, kMaxDim>& ijk) const;

    /// Signed Fourier mode per axis for a linear coefficient index.
    std::array<int, kMaxDim> mode(std::size_t idx) const;
    /// Linear coefficient index of a signed mode (modes wrap modulo n).
    std::size_t mode_index(const std::array<int, kMaxDim>& m) const;
    bool is_nyquist(int signed_mode) const { return signed_mode == -n_ / 2; }

    /// Physical wavevector 2*pi*m/L and its squared norm for a coefficient.
    std::array<double, kMaxDim> wavevector(std::size_t idx) const;
    double wavenumber_sq(std::size_t idx) const;

    /// Coordinate of sample idx along axis (x = i*h).
    double coordinate(std::size_t idx, int axis) const;

    bool operator==(const Grid& other) const = default;

  private:
    int dim_;
    int n_;
    double length_;
    std::size_t size_;
};

/// Real samples of a scalar field on a grid.
struct Field {
    Grid grid;
    std::vector<double> values;

    explicit Field(const Grid& g, double fill = 0.0) : grid(g), values(g.size(), fill) {}
    Field(const Grid& g, std::vector<double> v);

    std::size_t size() const { return values.size(); }
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }

    double mean() const;
    double min() const;
    double max() const;
    double max_abs() const;
    bool all_finite() const;

    /// Rectangle-rule integral over the box.
    double integral() const;

    /// Field with values f(x) sampled at the grid points.
    static Field sample(const Grid& g, const std::function<double(std::span<const double>)>& f);
};

/// Fourier coefficients in FFT order, normalized so the zero mode is the mean.
struct SpectralField {
    Grid grid;
    std::vector<Complex> coeffs;

    explicit SpectralField(const Grid& g) : grid(g), coeffs(g.size(), Complex{}) {}

    Complex& at(const std::array<int, kMaxDim>& m) { return coeffs[grid.mode_index(m)]; }
    Complex at(const std::array<int, kMaxDim>& m) const { return coeffs[grid.mode_index(m)]; }
};

void require_same_grid(const Grid& a, const Grid& b);

Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(const Field& a, const Field& b);
Field operator*(double s, const Field& a);
Field& operator+=(Field& a, const Field& b);
/// a += s*b
void axpy(double s, const Field& b, Field& a);

Field map(const Field& f, const std::function<double(double)>& fn);

/// Rectangle-rule integral of f*g.
double inner(const Field& f, const Field& g);
double l2_norm(const Field& f);

}  // namespace erz
