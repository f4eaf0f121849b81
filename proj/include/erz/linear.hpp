#pragma once

#include <array>
#include <complex>
#include <vector>

namespace erz::linear {

using Complex = std::complex<double>;
using Vec = std::array<double, 2>;
using CVec = std::array<Complex, 2>;

/// Coefficients of the linearization around (rho, u) = (1, 0).
///
/// `cp` is the coefficient multiplying grad(rho) in the linearized momentum
/// equation; for the nonlinear model with pressure cp_nl * rho^gamma this is
/// cp_nl * gamma.
struct LinearParams {
    double cp = 0.0;
    double ck = 0.0;
    double alpha = 0.0;
    int dim = 1;

    void validate() const;
};

enum class Posedness { WellPosed, IllPosed };

const char* to_string(Posedness p);

/// One Fourier mode of the linearized system.
struct ModeState {
    Vec k{};
    Complex rho_hat{};
    CVec u_hat{};
    double t = 0.0;
};

/// lambda^2(k) = |k|^2 (ck |k|^{alpha-d} - cp); negative means oscillation.
double growth_rate_squared(const Vec& k, const LinearParams& p);
double growth_rate_squared(double k_norm, const LinearParams& p);

/// WellPosed iff lambda^2 stays bounded above as |k| -> infinity.
Posedness classify(const LinearParams& p);

/// (-ck |k|^{alpha-d} + cp) |rho_hat|^2 + |u_hat|^2
double quadratic_invariant(const ModeState& m, const LinearParams& p);

/// Exact solution of the per-mode linear ODE advanced by t.
ModeState evolve_mode(const ModeState& m0, const LinearParams& p, double t);

/// Largest phase speed sqrt(max(0, -lambda^2))/|k| over the given wavenumbers.
double max_wave_speed(const std::vector<double>& k_norms, const LinearParams& p);

struct DispersionRow {
    double k_norm;
    double lambda_sq;
    double omega_or_rate;
    const char* kind;  // "oscillatory", "growing" or "neutral"
};

/// Rows for |k| = dk, 2 dk, ..., <= kmax.
std::vector<DispersionRow> dispersion_table(const LinearParams& p, double kmax, double dk = 1.0);

}  // namespace erz::linear
