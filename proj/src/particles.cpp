#include "erz/particles.hpp"

#include <algorithm>
#include <cmath>

#include "erz/parallel.hpp"
#include "erz/rng.hpp"
#include "erz/spectral.hpp"

namespace erz {

void ParticleEnsemble::validate() const {
    if (dim < 1 || dim > kMaxDim) throw InvalidArgument("particle dimension must be 1 or 2");
    if (x.empty() || x.size() % static_cast<std::size_t>(dim) != 0)
        throw InvalidArgument("particle ensemble needs N >= 1 positions with d coordinates each");
    if (v.size() != x.size()) throw InvalidArgument("velocity count does not match position count");
    if (!(softening >= 0.0)) throw InvalidArgument("softening must be >= 0");
    if (!std::isfinite(alpha) || !std::isfinite(ck)) throw InvalidArgument("alpha and ck must be finite");
    for (double c : x)
        if (!std::isfinite(c)) throw InvalidArgument("non-finite particle position");
    for (double c : v)
        if (!std::isfinite(c)) throw InvalidArgument("non-finite particle velocity");
}

namespace {

// s^{-p} for the exponents used most often, with a pow fallback.
struct InversePower {
    double p;

    double operator()(double s) const {
        if (p == 1.25) return 1.0 / (s * std::sqrt(std::sqrt(s)));
        if (p == 0.25) return 1.0 / std::sqrt(std::sqrt(s));
        if (p == 1.5) return 1.0 / (s * std::sqrt(s));
        if (p == 0.5) return 1.0 / std::sqrt(s);
        if (p == 1.0) return 1.0 / s;
        return std::pow(s, -p);
    }
};

constexpr std::size_t kForceChunks = 32;

}  // namespace

double riesz_kernel(double r_sq, double alpha, double delta) {
    return InversePower{0.5 * alpha}(r_sq + delta * delta);
}

std::vector<double> riesz_force(const ParticleEnsemble& e) {
    e.validate();
    const std::size_t n = e.size();
    const int d = e.dim;
    const double delta_sq = e.softening * e.softening;
    const InversePower inv{0.5 * (e.alpha + 2.0)};
    const double scale = e.ck / static_cast<double>(n);
    std::vector<double> out(e.x.size(), 0.0);
    if (n == 1) return out;

    // Rows are split so each chunk carries roughly the same number of pairs.
    std::vector<std::size_t> bounds{0};
    const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
    for (std::size_t c = 1; c < kForceChunks; ++c) {
        const double target = pairs * c / kForceChunks;
        // rows [0, r) contain r*n - r(r+1)/2 pairs
        const double nn = static_cast<double>(n);
        const double r = (2.0 * nn - 1.0 - std::sqrt((2.0 * nn - 1.0) * (2.0 * nn - 1.0) - 8.0 * target)) / 2.0;
        bounds.push_back(std::clamp<std::size_t>(static_cast<std::size_t>(r), bounds.back(), n));
    }
    bounds.push_back(n);

    std::vector<std::vector<double>> partial(kForceChunks);
    std::vector<std::size_t> collision_i(kForceChunks, n), collision_j(kForceChunks, n);
    parallel_chunks(kForceChunks, [&](std::size_t c) {
        const std::size_t lo = bounds[c];
        const std::size_t hi = bounds[c + 1];
        if (lo == hi) return;
        auto& acc = partial[c];
        acc.assign(e.x.size(), 0.0);
        for (std::size_t i = lo; i < hi; ++i) {
            const double* xi = &e.x[i * d];
            for (std::size_t j = i + 1; j < n; ++j) {
                const double* xj = &e.x[j * d];
                double z[kMaxDim];
                double s = delta_sq;
                for (int a = 0; a < d; ++a) {
                    z[a] = xi[a] - xj[a];
                    s += z[a] * z[a];
                }
                const double w = inv(s);
                if (!std::isfinite(w)) {
                    if (collision_i[c] == n) {
                        collision_i[c] = i;
                        collision_j[c] = j;
                    }
                    continue;
                }
                for (int a = 0; a < d; ++a) {
                    const double f = -e.alpha * z[a] * w;
                    acc[i * d + a] += f;
                    acc[j * d + a] -= f;
                }
            }
        }
    });
    for (std::size_t c = 0; c < kForceChunks; ++c)
        if (collision_i[c] != n) throw ParticleCollision(collision_i[c], collision_j[c]);
    for (const auto& acc : partial) {
        if (acc.empty()) continue;
        for (std::size_t k = 0; k < out.size(); ++k) out[k] += acc[k];
    }
    for (double& a : out) a *= scale;
    return out;
}

ParticleEnsemble verlet_step(ParticleEnsemble e, double dt) {
    if (!(dt != 0.0) || !std::isfinite(dt)) throw InvalidArgument("verlet_step needs a finite nonzero dt");
    std::vector<double> a = (e.cached_x == e.x && e.cached_a.size() == e.x.size()) ? e.cached_a : riesz_force(e);
    const double h = 0.5 * dt;
    for (std::size_t k = 0; k < e.x.size(); ++k) {
        e.v[k] += h * a[k];
        e.x[k] += dt * e.v[k];
    }
    a = riesz_force(e);
    for (std::size_t k = 0; k < e.x.size(); ++k) e.v[k] += h * a[k];
    e.cached_x = e.x;
    e.cached_a = std::move(a);
    return e;
}

ParticleFunctionals particle_functionals(const ParticleEnsemble& e) {
    e.validate();
    const std::size_t n = e.size();
    const int d = e.dim;
    ParticleFunctionals f;
    for (std::size_t i = 0; i < n; ++i) {
        for (int a = 0; a < d; ++a) {
            const double xa = e.x[i * d + a];
            const double va = e.v[i * d + a];
            f.inertia += 0.5 * xa * xa;
            f.virial += xa * va;
            f.kinetic += 0.5 * va * va;
            f.momentum[a] += va;
            f.mean[a] += xa;
        }
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    f.inertia *= inv_n;
    f.virial *= inv_n;
    f.kinetic *= inv_n;
    for (int a = 0; a < d; ++a) {
        f.momentum[a] *= inv_n;
        f.mean[a] *= inv_n;
    }

    std::vector<double> rows(n, 0.0);
    const InversePower inv{0.5 * e.alpha};
    const double delta_sq = e.softening * e.softening;
    parallel_chunks(n, [&](std::size_t i) {
        double s_i = 0.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            double s = delta_sq;
            for (int a = 0; a < d; ++a) {
                const double z = e.x[i * d + a] - e.x[j * d + a];
                s += z * z;
            }
            s_i += inv(s);
        }
        rows[i] = s_i;
    });
    double sum = 0.0;
    for (double r : rows) sum += r;
    // Each unordered pair appears twice in the sum over i != j.
    f.interaction = sum / (static_cast<double>(n) * static_cast<double>(n));
    f.hamiltonian = f.kinetic - e.ck * f.interaction;
    return f;
}

double hamiltonian(const ParticleEnsemble& e) { return particle_functionals(e).hamiltonian; }

namespace {

// exp(i * sign * k0 * m * x) for signed modes m in FFT order.
void phase_table(const Grid& g, double x, double sign, std::vector<Complex>& out) {
    const int n = g.points();
    out.resize(static_cast<std::size_t>(n));
    const Complex step = std::polar(1.0, sign * g.k0() * x);
    Complex p(1.0, 0.0);
    Complex q(1.0, 0.0);
    out[0] = 1.0;
    for (int m = 1; m <= n / 2; ++m) {
        p *= step;
        q = std::conj(p);
        if (m < n / 2) out[static_cast<std::size_t>(m)] = p;
        out[static_cast<std::size_t>(n - m)] = q;
    }
}

}  // namespace

Field empirical_density(const ParticleEnsemble& e, const Grid& grid, double bandwidth,
                        std::optional<std::array<double, kMaxDim>> origin) {
    e.validate();
    if (!(bandwidth > 0.0)) throw InvalidArgument("bandwidth must be > 0");
    if (e.dim != grid.dim()) throw InvalidArgument("ensemble and grid dimensions differ");
    const int d = grid.dim();
    const std::size_t n = e.size();
    const int np = grid.points();
    std::array<double, kMaxDim> o{};
    for (int a = 0; a < d; ++a) o[a] = origin ? (*origin)[a] : 0.5 * grid.box_length();

    SpectralField hat(grid);
    std::vector<Complex> p0, p1;
    for (std::size_t i = 0; i < n; ++i) {
        phase_table(grid, e.x[i * d] + o[0], -1.0, p0);
        if (d == 1) {
            for (int m = 0; m < np; ++m) hat.coeffs[static_cast<std::size_t>(m)] += p0[static_cast<std::size_t>(m)];
        } else {
            phase_table(grid, e.x[i * d + 1] + o[1], -1.0, p1);
            for (int m0 = 0; m0 < np; ++m0) {
                const Complex a = p0[static_cast<std::size_t>(m0)];
                Complex* row = &hat.coeffs[static_cast<std::size_t>(m0) * static_cast<std::size_t>(np)];
                for (int m1 = 0; m1 < np; ++m1) row[m1] += a * p1[static_cast<std::size_t>(m1)];
            }
        }
    }
    const double norm = 1.0 / (static_cast<double>(n) * grid.volume());
    for (std::size_t k = 0; k < hat.coeffs.size(); ++k)
        hat.coeffs[k] *= norm * std::exp(-0.5 * bandwidth * bandwidth * grid.wavenumber_sq(k));
    return inverse_transform(hat);
}

Sampler sampler_from_string(const std::string& s) {
    if (s == "iid") return Sampler::Iid;
    if (s == "quadrature") return Sampler::Quadrature;
    throw InvalidArgument("unknown sampler '" + s + "'");
}

const char* to_string(Sampler s) { return s == Sampler::Iid ? "iid" : "quadrature"; }

namespace {

// Evaluates many points against one precomputed spectrum.
class Interpolant {
  public:
    explicit Interpolant(const Field& f) : grid_(f.grid), hat_(forward_transform(f)), zero_(f.max_abs() == 0.0) {}

    double operator()(const double* x) {
        if (zero_) return 0.0;
        const int np = grid_.points();
        phase_table(grid_, x[0], 1.0, p0_);
        Complex acc(0.0, 0.0);
        if (grid_.dim() == 1) {
            for (int m = 0; m < np; ++m) acc += hat_.coeffs[static_cast<std::size_t>(m)] * p0_[static_cast<std::size_t>(m)];
            return acc.real();
        }
        phase_table(grid_, x[1], 1.0, p1_);
        for (int m0 = 0; m0 < np; ++m0)
            for (int m1 = 0; m1 < np; ++m1)
                acc += hat_.coeffs[static_cast<std::size_t>(m0) * static_cast<std::size_t>(np) +
                                   static_cast<std::size_t>(m1)] *
                       p0_[static_cast<std::size_t>(m0)] * p1_[static_cast<std::size_t>(m1)];
        return acc.real();
    }

  private:
    Grid grid_;
    SpectralField hat_;
    bool zero_;
    std::vector<Complex> p0_, p1_;
};

}  // namespace

double interpolate(const Field& f, std::span<const double> x) {
    if (static_cast<int>(x.size()) != f.grid.dim()) throw InvalidArgument("interpolate: point dimension mismatch");
    return Interpolant(f)(x.data());
}

ParticleEnsemble sample_monokinetic(const Field& rho, const std::vector<Field>& u, const SampleSpec& spec) {
    const Grid& g = rho.grid;
    const int d = g.dim();
    if (static_cast<int>(u.size()) != d) throw InvalidArgument("velocity needs one component per dimension");
    for (const auto& c : u) require_same_grid(g, c.grid);
    if (spec.count == 0) throw InvalidArgument("particle count must be >= 1");

    std::vector<double> cdf(g.size());
    double total = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        total += std::max(rho[i] - spec.background, 0.0);
        cdf[i] = total;
    }
    if (!(total > 0.0)) throw InvalidArgument("density has no mass above the background");
    for (double& c : cdf) c /= total;

    const double h = g.spacing();
    const double half_box = 0.5 * g.box_length();
    ParticleEnsemble e;
    e.dim = d;
    e.alpha = spec.alpha;
    e.ck = spec.ck;
    e.x.resize(spec.count * static_cast<std::size_t>(d));
    e.v.resize(e.x.size());

    Philox rng(spec.seed);
    for (std::size_t p = 0; p < spec.count; ++p) {
        const double target =
            spec.sampler == Sampler::Iid ? rng.uniform() : (static_cast<double>(p) + 0.5) / static_cast<double>(spec.count);
        const std::size_t cell =
            std::min<std::size_t>(static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), target) - cdf.begin()),
                                  g.size() - 1);
        for (int a = 0; a < d; ++a) {
            double offset;
            if (spec.sampler == Sampler::Iid) {
                offset = rng.uniform(-0.5, 0.5);
            } else if (a == 0) {
                // Position inside the cell follows the quantile's place in the cell's CDF slice.
                const double lo = cell == 0 ? 0.0 : cdf[cell - 1];
                const double width = cdf[cell] - lo;
                offset = width > 0.0 ? (target - lo) / width - 0.5 : 0.0;
            } else {
                offset = 0.0;
            }
            e.x[p * d + a] = g.coordinate(cell, a) + offset * h - half_box;
        }
    }

    std::vector<Interpolant> interp;
    for (const auto& c : u) interp.emplace_back(c);
    std::array<double, kMaxDim> xb{};
    for (std::size_t p = 0; p < spec.count; ++p) {
        for (int a = 0; a < d; ++a) xb[a] = e.x[p * d + a] + half_box;
        for (int a = 0; a < d; ++a) e.v[p * d + a] = interp[a](xb.data());
    }

    double extent = 1.0;
    for (int a = 0; a < d; ++a) {
        double lo = e.x[a], hi = e.x[a];
        for (std::size_t p = 0; p < spec.count; ++p) {
            lo = std::min(lo, e.x[p * d + a]);
            hi = std::max(hi, e.x[p * d + a]);
        }
        extent *= std::max(hi - lo, h);
    }
    const double spacing = std::pow(extent / static_cast<double>(spec.count), 1.0 / d);
    e.softening = spec.softening >= 0.0 ? spec.softening : 1e-3 * spacing;
    return e;
}

}  // namespace erz
