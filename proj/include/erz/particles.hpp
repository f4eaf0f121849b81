#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "erz/field.hpp"

namespace erz {

/// N interacting particles in free space R^d, coordinates stored
/// interleaved (x[i*d + a]).
struct ParticleEnsemble {
    int dim = 1;
    std::vector<double> x;
    std::vector<double> v;
    double alpha = 0.5;
    double ck = 1.0;
    double softening = 0.0;

    std::size_t size() const { return x.size() / static_cast<std::size_t>(dim); }

    /// Throws InvalidArgument on inconsistent sizes, N = 0, delta < 0 or non-finite data.
    void validate() const;

    // Accelerations at `cached_x`, reused by verlet_step when x is unchanged.
    std::vector<double> cached_x;
    std::vector<double> cached_a;
};

/// K_delta(z) = (|z|^2 + delta^2)^{-alpha/2}
double riesz_kernel(double r_sq, double alpha, double delta);

/// a_i = (ck/N) sum_{j != i} grad K_delta(x_i - x_j), grad K_delta(z) = -alpha z (|z|^2 + delta^2)^{-(alpha+2)/2}.
/// Pair contributions are accumulated per fixed row chunk and reduced in
/// chunk order, so the result does not depend on the thread count.
std::vector<double> riesz_force(const ParticleEnsemble& e);

/// Velocity Verlet (kick-drift-kick). Negative dt steps backwards.
ParticleEnsemble verlet_step(ParticleEnsemble e, double dt);

struct ParticleFunctionals {
    double inertia = 0.0;      // (1/N) sum |x_i|^2 / 2
    double virial = 0.0;       // (1/N) sum x_i . v_i
    double kinetic = 0.0;      // (1/N) sum |v_i|^2 / 2
    double interaction = 0.0;  // (1/(2N^2)) sum_{i != j} K_delta(x_i - x_j)
    double hamiltonian = 0.0;  // kinetic - ck * interaction
    std::array<double, kMaxDim> momentum{};  // (1/N) sum v_i
    std::array<double, kMaxDim> mean{};      // (1/N) sum x_i
};

ParticleFunctionals particle_functionals(const ParticleEnsemble& e);

/// H = (1/N) sum |v|^2/2 - (ck/(2N^2)) sum_{i != j} K_delta
double hamiltonian(const ParticleEnsemble& e);

/// Periodized Gaussian kernel density estimate of the empirical measure, with
/// the particle origin placed at `origin` in box coordinates (box centre by
/// default). Built from its Fourier series, so it integrates to 1.
Field empirical_density(const ParticleEnsemble& e, const Grid& grid, double bandwidth,
                        std::optional<std::array<double, kMaxDim>> origin = std::nullopt);

enum class Sampler { Iid, Quadrature };

Sampler sampler_from_string(const std::string& s);
const char* to_string(Sampler s);

struct SampleSpec {
    std::size_t count = 1000;
    Sampler sampler = Sampler::Iid;
    std::uint64_t seed = 0;
    /// Density level subtracted before sampling (negative remainders count as zero).
    double background = 0.0;
    double alpha = 0.5;
    double ck = 1.0;
    /// Negative means the default 1e-3 * mean interparticle spacing.
    double softening = -1.0;
};

/// Mono-kinetic particles: positions distributed like rho - background on the
/// grid cells, velocities v_i = u(x_i) by trigonometric interpolation.
/// Positions are relative to the box centre.
ParticleEnsemble sample_monokinetic(const Field& rho, const std::vector<Field>& u, const SampleSpec& spec);

/// Value at an arbitrary point of the trigonometric interpolant of f.
double interpolate(const Field& f, std::span<const double> x);

}  // namespace erz
