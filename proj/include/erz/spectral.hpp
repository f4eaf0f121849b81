#pragma once

#include <array>
#include <span>
#include <vector>

#include "erz/field.hpp"

namespace erz {

/// Fourier multiplier |k|^s with an explicit value at k = 0.
struct MultiplierSpec {
    double exponent = 0.0;
    double zero_mode_value = 0.0;

    double operator()(double k_sq) const;
};

/// Largest |s| accepted by riesz_power before the multiplier is rejected as overflow-prone.
inline constexpr double kMaxRieszExponent = 8.0;

SpectralField forward_transform(const Field& f);
Field inverse_transform(const SpectralField& f);

/// Lambda^s = (-Delta)^{s/2} as the multiplier |k|^s.
///
/// For s != 0 the k = 0 coefficient is set to zero (the mean is projected out);
/// s = 0 is the identity.
Field riesz_power(const Field& f, double s);
void riesz_power_inplace(SpectralField& f, double s);

using MultiIndex = std::array<int, kMaxDim>;

/// All multi-indices of exactly the given total order in dimension d.
std::vector<MultiIndex> multi_indices(int dim, int order);

/// Spectral partial derivative d^beta f. Odd derivatives zero the Nyquist mode.
Field partial(const Field& f, const MultiIndex& beta);
Field partial(const Field& f, int axis);
void partial_inplace(SpectralField& f, const MultiIndex& beta);

std::vector<Field> gradient(const Field& f);
Field divergence(std::span<const Field> v);

/// Multiply each coefficient by exp(-tau |k|^2): the heat semigroup at time tau.
Field heat_semigroup(const Field& f, double tau);

/// (sum_k (1+|k|^2)^s |f_k|^2 L^d)^{1/2}.
double sobolev_norm(const Field& f, double s);

/// Homogeneous version (sum_{k != 0} |k|^{2s} |f_k|^2 L^d)^{1/2}.
double homogeneous_sobolev_norm(const Field& f, double s);

/// (sum over multi-indices 1 <= |beta| <= m of ||d^beta f||_{L^2}^2)^{1/2}.
double derivative_sobolev_norm(const Field& f, int m);

/// Density-weighted norm (sum_{0<|beta|<=m} ||rho^{-1/2} d^beta rho||_{L^2}^2)^{1/2}.
double modified_sobolev_norm(const Field& rho, int m);

/// Two-thirds rule: zero every coefficient with some |m_i| >= n/3.
SpectralField dealias(SpectralField f);
Field dealias(const Field& f);
bool is_dealiased_mode(const Grid& g, std::size_t idx);

/// Fraction of the non-mean spectral energy carried by modes whose largest
/// axis index is at least (5/6) * band, where band is n/3 when dealiased
/// (the retained band) and n/2 otherwise. Returns 0 for a constant field.
double spectral_tail_ratio(const Field& f, bool dealiased);

struct TailEnergy {
    double tail = 0.0;
    double total = 0.0;
};
/// The two sums behind spectral_tail_ratio, for pooling over several fields.
TailEnergy spectral_tail_energy(const Field& f, bool dealiased);

/// Trigonometric interpolation of f onto a grid with a different number of points per axis.
Field resample(const Field& f, int points);

}  // namespace erz
