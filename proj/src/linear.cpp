#include "erz/linear.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "erz/errors.hpp"

namespace erz::linear {

void LinearParams::validate() const {
    if (dim < 1 || dim > 2) throw InvalidArgument("linear analysis supports d = 1 or 2");
    if (!(cp >= 0.0)) throw InvalidArgument("cp must be >= 0");
    if (!(alpha > dim - 2 && alpha < dim))
        throw InvalidArgument("alpha must lie in the open interval (d-2, d)");
    if (!std::isfinite(ck)) throw InvalidArgument("ck must be finite");
}

const char* to_string(Posedness p) { return p == Posedness::WellPosed ? "WellPosed" : "IllPosed"; }

double growth_rate_squared(double k_norm, const LinearParams& p) {
    if (k_norm == 0.0) throw ZeroWavevector();
    return k_norm * k_norm * (p.ck * std::pow(k_norm, p.alpha - p.dim) - p.cp);
}

double growth_rate_squared(const Vec& k, const LinearParams& p) {
    return growth_rate_squared(std::hypot(k[0], p.dim > 1 ? k[1] : 0.0), p);
}

Posedness classify(const LinearParams& p) {
    p.validate();
    return (p.ck > 0.0 && p.cp == 0.0) ? Posedness::IllPosed : Posedness::WellPosed;
}

double quadratic_invariant(const ModeState& m, const LinearParams& p) {
    const double k = std::hypot(m.k[0], p.dim > 1 ? m.k[1] : 0.0);
    if (k == 0.0) throw ZeroWavevector();
    const double a = p.cp - p.ck * std::pow(k, p.alpha - p.dim);
    double u2 = 0.0;
    for (int i = 0; i < p.dim; ++i) u2 += std::norm(m.u_hat[i]);
    return a * std::norm(m.rho_hat) + u2;
}

ModeState evolve_mode(const ModeState& m0, const LinearParams& p, double t) {
    const double k = std::hypot(m0.k[0], p.dim > 1 ? m0.k[1] : 0.0);
    if (k == 0.0) throw ZeroWavevector();
    // Split u_hat into the component along k (coupled to rho) and the rest (frozen).
    Vec khat{};
    for (int i = 0; i < p.dim; ++i) khat[i] = m0.k[i] / k;
    Complex w0{};
    for (int i = 0; i < p.dim; ++i) w0 += khat[i] * m0.u_hat[i];

    // rho' = -i|k| w,  w' = -i|k| a rho,  with lambda^2 = -|k|^2 a.
    const double a = p.cp - p.ck * std::pow(k, p.alpha - p.dim);
    const double lambda_sq = -k * k * a;
    const Complex ik(0.0, k);
    Complex rho{}, w{};
    if (lambda_sq < 0.0) {
        const double omega = std::sqrt(-lambda_sq);
        const double c = std::cos(omega * t), s = std::sin(omega * t) / omega;
        rho = m0.rho_hat * c - ik * w0 * s;
        w = w0 * c - ik * a * m0.rho_hat * s;
    } else if (lambda_sq > 0.0) {
        const double sigma = std::sqrt(lambda_sq);
        const double c = std::cosh(sigma * t), s = std::sinh(sigma * t) / sigma;
        rho = m0.rho_hat * c - ik * w0 * s;
        w = w0 * c - ik * a * m0.rho_hat * s;
    } else {
        rho = m0.rho_hat - ik * w0 * t;
        w = w0;
    }

    ModeState out = m0;
    out.t = m0.t + t;
    out.rho_hat = rho;
    for (int i = 0; i < p.dim; ++i) out.u_hat[i] = m0.u_hat[i] + (w - w0) * khat[i];
    return out;
}

double max_wave_speed(const std::vector<double>& k_norms, const LinearParams& p) {
    double c = 0.0;
    for (double k : k_norms) {
        if (k == 0.0) continue;
        c = std::max(c, std::sqrt(std::max(0.0, -growth_rate_squared(k, p))) / k);
    }
    return c;
}

std::vector<DispersionRow> dispersion_table(const LinearParams& p, double kmax, double dk) {
    p.validate();
    if (!(dk > 0.0) || !(kmax >= dk)) throw InvalidArgument("dispersion table needs 0 < dk <= kmax");
    std::vector<DispersionRow> rows;
    const auto count = static_cast<long>(std::floor(kmax / dk + 1e-9));
    for (long j = 1; j <= count; ++j) {
        const double k = dk * static_cast<double>(j);
        const double l2 = growth_rate_squared(k, p);
        const char* kind = l2 < 0.0 ? "oscillatory" : (l2 > 0.0 ? "growing" : "neutral");
        rows.push_back({k, l2, std::sqrt(std::abs(l2)), kind});
    }
    return rows;
}

}  // namespace erz::linear
