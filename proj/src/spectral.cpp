#include "erz/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

namespace erz {

namespace {

// FFTW plans for one (dim, n) shape. Execution through fftw_execute_dft on
// caller-owned buffers is thread-safe; only plan creation needs the lock.
struct PlanPair {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;

    PlanPair(int dim, int n) {
        std::vector<int> dims(static_cast<std::size_t>(dim), n);
        std::size_t size = 1;
        for (int a = 0; a < dim; ++a) size *= static_cast<std::size_t>(n);
        std::vector<Complex> scratch(size);
        auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        forward = fftw_plan_dft(dim, dims.data(), buf, buf, FFTW_FORWARD, flags);
        backward = fftw_plan_dft(dim, dims.data(), buf, buf, FFTW_BACKWARD, flags);
    }
    ~PlanPair() {
        fftw_destroy_plan(forward);
        fftw_destroy_plan(backward);
    }
    PlanPair(const PlanPair&) = delete;
    PlanPair& operator=(const PlanPair&) = delete;
};

const PlanPair& plans_for(const Grid& g) {
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::unique_ptr<PlanPair>> registry;
    std::lock_guard<std::mutex> lock(mutex);
    auto key = std::make_pair(g.dim(), g.points());
    auto it = registry.find(key);
    if (it == registry.end()) it = registry.emplace(key, std::make_unique<PlanPair>(g.dim(), g.points())).first;
    return *it->second;
}

void execute(fftw_plan plan, std::vector<Complex>& data) {
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, buf, buf);
}

}  // namespace

double MultiplierSpec::operator()(double k_sq) const {
    if (k_sq == 0.0) return zero_mode_value;
    return std::pow(k_sq, 0.5 * exponent);
}

SpectralField forward_transform(const Field& f) {
    if (!f.all_finite()) throw NonFinite("forward_transform: non-finite sample");
    SpectralField out(f.grid);
    for (std::size_t i = 0; i < f.size(); ++i) out.coeffs[i] = Complex(f.values[i], 0.0);
    execute(plans_for(f.grid).forward, out.coeffs);
    const double scale = 1.0 / static_cast<double>(f.size());
    for (auto& c : out.coeffs) c *= scale;
    return out;
}

Field inverse_transform(const SpectralField& f) {
    std::vector<Complex> work = f.coeffs;
    execute(plans_for(f.grid).backward, work);
    Field out(f.grid);
    for (std::size_t i = 0; i < work.size(); ++i) out.values[i] = work[i].real();
    return out;
}

void riesz_power_inplace(SpectralField& f, double s) {
    if (!std::isfinite(s) || std::abs(s) > kMaxRieszExponent)
        throw InvalidArgument("riesz_power exponent must satisfy |s| <= 8");
    if (s == 0.0) return;
    const MultiplierSpec mult{s, 0.0};
    for (std::size_t i = 0; i < f.coeffs.size(); ++i) f.coeffs[i] *= mult(f.grid.wavenumber_sq(i));
}

Field riesz_power(const Field& f, double s) {
    auto hat = forward_transform(f);
    riesz_power_inplace(hat, s);
    auto out = inverse_transform(hat);
    if (!out.all_finite()) throw NonFinite("riesz_power overflowed");
    return out;
}

std::vector<MultiIndex> multi_indices(int dim, int order) {
    std::vector<MultiIndex> out;
    if (dim == 1) {
        out.push_back({order, 0});
    } else {
        for (int a = order; a >= 0; --a) out.push_back({a, order - a});
    }
    return out;
}

void partial_inplace(SpectralField& f, const MultiIndex& beta) {
    const Grid& g = f.grid;
    for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
        auto m = g.mode(i);
        Complex factor(1.0, 0.0);
        for (int a = 0; a < g.dim(); ++a) {
            if (beta[a] == 0) continue;
            if (beta[a] % 2 == 1 && g.is_nyquist(m[a])) {
                factor = 0.0;
                break;
            }
            const Complex ik(0.0, g.k0() * m[a]);
            for (int p = 0; p < beta[a]; ++p) factor *= ik;
        }
        f.coeffs[i] *= factor;
    }
}

Field partial(const Field& f, const MultiIndex& beta) {
    auto hat = forward_transform(f);
    partial_inplace(hat, beta);
    return inverse_transform(hat);
}

Field partial(const Field& f, int axis) {
    MultiIndex beta{};
    beta[axis] = 1;
    return partial(f, beta);
}

std::vector<Field> gradient(const Field& f) {
    const auto hat = forward_transform(f);
    std::vector<Field> out;
    for (int a = 0; a < f.grid.dim(); ++a) {
        auto h = hat;
        MultiIndex beta{};
        beta[a] = 1;
        partial_inplace(h, beta);
        out.push_back(inverse_transform(h));
    }
    return out;
}

Field divergence(std::span<const Field> v) {
    if (v.empty()) throw InvalidArgument("divergence of an empty vector field");
    const Grid& g = v[0].grid;
    if (static_cast<int>(v.size()) != g.dim()) throw InvalidArgument("divergence: component count != dimension");
    SpectralField acc(g);
    for (int a = 0; a < g.dim(); ++a) {
        require_same_grid(g, v[a].grid);
        auto hat = forward_transform(v[a]);
        MultiIndex beta{};
        beta[a] = 1;
        partial_inplace(hat, beta);
        for (std::size_t i = 0; i < acc.coeffs.size(); ++i) acc.coeffs[i] += hat.coeffs[i];
    }
    return inverse_transform(acc);
}

Field heat_semigroup(const Field& f, double tau) {
    if (tau == 0.0) return f;
    auto hat = forward_transform(f);
    for (std::size_t i = 0; i < hat.coeffs.size(); ++i) hat.coeffs[i] *= std::exp(-tau * f.grid.wavenumber_sq(i));
    return inverse_transform(hat);
}

double sobolev_norm(const Field& f, double s) {
    if (!(s >= -8.0 && s <= 8.0)) throw InvalidArgument("sobolev_norm order must lie in [-8, 8]");
    const auto hat = forward_transform(f);
    double acc = 0.0;
    for (std::size_t i = 0; i < hat.coeffs.size(); ++i)
        acc += std::pow(1.0 + f.grid.wavenumber_sq(i), s) * std::norm(hat.coeffs[i]);
    return std::sqrt(acc * f.grid.volume());
}

double homogeneous_sobolev_norm(const Field& f, double s) {
    const auto hat = forward_transform(f);
    double acc = 0.0;
    for (std::size_t i = 0; i < hat.coeffs.size(); ++i) {
        const double k_sq = f.grid.wavenumber_sq(i);
        if (k_sq == 0.0) continue;
        acc += std::pow(k_sq, s) * std::norm(hat.coeffs[i]);
    }
    return std::sqrt(acc * f.grid.volume());
}

double derivative_sobolev_norm(const Field& f, int m) {
    if (m < 1) throw InvalidArgument("derivative_sobolev_norm needs m >= 1");
    const auto hat = forward_transform(f);
    double acc = 0.0;
    for (int order = 1; order <= m; ++order) {
        for (const auto& beta : multi_indices(f.grid.dim(), order)) {
            auto h = hat;
            partial_inplace(h, beta);
            const auto d = inverse_transform(h);
            acc += inner(d, d);
        }
    }
    return std::sqrt(acc);
}

double modified_sobolev_norm(const Field& rho, int m) {
    if (m < 1 || m > 6) throw InvalidArgument("modified_sobolev_norm order must lie in [1, 6]");
    const double floor = rho.min();
    if (!(floor > 0.0)) throw NonPositiveDensity(floor);
    const auto hat = forward_transform(rho);
    double acc = 0.0;
    for (int order = 1; order <= m; ++order) {
        for (const auto& beta : multi_indices(rho.grid.dim(), order)) {
            auto h = hat;
            partial_inplace(h, beta);
            const auto d = inverse_transform(h);
            double s = 0.0;
            for (std::size_t i = 0; i < d.size(); ++i) s += d.values[i] * d.values[i] / rho.values[i];
            acc += s * rho.grid.cell_volume();
        }
    }
    return std::sqrt(acc);
}

bool is_dealiased_mode(const Grid& g, std::size_t idx) {
    const auto m = g.mode(idx);
    for (int a = 0; a < g.dim(); ++a)
        if (3 * std::abs(m[a]) >= g.points()) return true;
    return false;
}

SpectralField dealias(SpectralField f) {
    for (std::size_t i = 0; i < f.coeffs.size(); ++i)
        if (is_dealiased_mode(f.grid, i)) f.coeffs[i] = 0.0;
    return f;
}

Field dealias(const Field& f) { return inverse_transform(dealias(forward_transform(f))); }

TailEnergy spectral_tail_energy(const Field& f, bool dealiased) {
    const Grid& g = f.grid;
    const double band = dealiased ? g.points() / 3.0 : g.points() / 2.0;
    const double cut = 5.0 / 6.0 * band;
    const auto hat = forward_transform(f);
    TailEnergy out;
    for (std::size_t i = 0; i < hat.coeffs.size(); ++i) {
        const auto m = g.mode(i);
        int top = 0;
        for (int a = 0; a < g.dim(); ++a) top = std::max(top, std::abs(m[a]));
        if (top == 0) continue;
        const double e = std::norm(hat.coeffs[i]);
        out.total += e;
        if (top >= cut) out.tail += e;
    }
    return out;
}

double spectral_tail_ratio(const Field& f, bool dealiased) {
    const auto e = spectral_tail_energy(f, dealiased);
    if (!(e.total > 0.0)) return 0.0;
    return e.tail / e.total;
}

Field resample(const Field& f, int points) {
    const Grid& src = f.grid;
    const Grid dst(src.dim(), points, src.box_length());
    if (points == src.points()) return f;
    const auto hat = forward_transform(f);
    SpectralField out(dst);
    const bool refine = points > src.points();
    const int half_dst = points / 2;
    for (std::size_t i = 0; i < hat.coeffs.size(); ++i) {
        const auto m = src.mode(i);
        bool drop = false;
        std::vector<std::pair<MultiIndex, double>> targets{{m, 1.0}};
        for (int a = 0; a < src.dim(); ++a) {
            if (refine && src.is_nyquist(m[a])) {
                // A real field's Nyquist coefficient splits evenly between +-n/2.
                std::vector<std::pair<MultiIndex, double>> split;
                for (auto [mm, w] : targets) {
                    auto plus = mm;
                    plus[a] = -m[a];
                    split.push_back({mm, 0.5 * w});
                    split.push_back({plus, 0.5 * w});
                }
                targets = std::move(split);
            } else if (std::abs(m[a]) > half_dst) {
                drop = true;
            }
        }
        if (drop) continue;
        for (const auto& [mm, w] : targets) out.at(mm) += w * hat.coeffs[i];
    }
    return inverse_transform(out);
}

}  // namespace erz
