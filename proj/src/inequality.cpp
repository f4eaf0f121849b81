#include "erz/inequality.hpp"

#include <algorithm>
#include <cmath>

#include "erz/parallel.hpp"

namespace erz {

void TestFunctionSpec::validate() const {
    (void)grid();
    if (!(floor > 0.0)) throw InvalidArgument("test function floor must be > 0");
    if (cutoff < 1 || 2 * cutoff >= points) throw InvalidArgument("mode cutoff must satisfy 1 <= cutoff < n/2");
    if (!(amplitude_budget > 0.0)) throw InvalidArgument("amplitude budget must be > 0");
}

RatioSample make_sample(double lhs, double rhs, std::uint64_t trial) {
    RatioSample s;
    s.lhs = lhs;
    s.rhs = rhs;
    s.trial = trial;
    if (rhs >= 1e-14) s.ratio = lhs / rhs;
    return s;
}

namespace {

// Grid with half again as many points, rounded up to an even count.
int padded_points(int n) {
    int p = (3 * n + 1) / 2;
    return p % 2 == 0 ? p : p + 1;
}

Field padded(const Field& f) { return resample(f, padded_points(f.grid.points())); }

double factorial(int n) {
    double out = 1.0;
    for (int i = 2; i <= n; ++i) out *= i;
    return out;
}

void require_positive(const Field& g) {
    const double floor = g.min();
    if (!(floor > 0.0)) throw NonPositiveFunction("test function must be strictly positive (min = " +
                                                  std::to_string(floor) + ")");
}

std::vector<std::array<int, kMaxDim>> lattice_modes(int dim, int cutoff) {
    std::vector<std::array<int, kMaxDim>> out;
    if (dim == 1) {
        for (int k = 1; k <= cutoff; ++k) out.push_back({k, 0});
        return out;
    }
    // Half plane: one representative of each +-k pair.
    for (int k0 = 0; k0 <= cutoff; ++k0)
        for (int k1 = -cutoff; k1 <= cutoff; ++k1) {
            if (k0 == 0 && k1 <= 0) continue;
            out.push_back({k0, k1});
        }
    return out;
}

Field trig_sum(const Grid& g, const std::vector<std::array<int, kMaxDim>>& modes, const std::vector<double>& amp,
               const std::vector<double>& phase) {
    Field out(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < modes.size(); ++j) {
            double arg = phase[j];
            for (int a = 0; a < g.dim(); ++a) arg += modes[j][a] * g.k0() * g.coordinate(i, a);
            acc += amp[j] * std::cos(arg);
        }
        out[i] = acc;
    }
    return out;
}

}  // namespace

Field random_trig_polynomial(const Grid& g, int cutoff, double amplitude, Philox& rng) {
    const auto modes = lattice_modes(g.dim(), cutoff);
    std::vector<double> amp(modes.size()), phase(modes.size());
    for (std::size_t j = 0; j < modes.size(); ++j) {
        amp[j] = amplitude * rng.uniform();
        phase[j] = rng.uniform(0.0, 2.0 * kPi);
    }
    return trig_sum(g, modes, amp, phase);
}

Field generate_test_function(const TestFunctionSpec& spec, std::uint64_t trial) {
    spec.validate();
    const Grid g = spec.grid();
    Philox rng(spec.seed, trial);
    const auto modes = lattice_modes(g.dim(), spec.cutoff);
    std::vector<double> amp(modes.size()), phase(modes.size());
    double total = 0.0;
    for (std::size_t j = 0; j < modes.size(); ++j) {
        amp[j] = rng.uniform();
        phase[j] = rng.uniform(0.0, 2.0 * kPi);
        total += amp[j];
    }
    const double scale = spec.amplitude_budget * spec.floor * rng.uniform() / total;
    for (double& a : amp) a *= scale;
    Field p = trig_sum(g, modes, amp, phase);
    // Keep min g >= c/2 by shrinking the oscillating part if needed.
    const double low = p.min();
    if (spec.floor + low < 0.5 * spec.floor) p = (0.5 * spec.floor / -low) * p;
    for (double& v : p.values) v += spec.floor;
    return p;
}

Field tensor_norm_sq(const Field& g, int m) {
    const auto hat = forward_transform(g);
    Field out(g.grid);
    for (const auto& beta : multi_indices(g.grid.dim(), m)) {
        auto h = hat;
        partial_inplace(h, beta);
        const Field d = inverse_transform(h);
        double weight = factorial(m);
        for (int a = 0; a < g.grid.dim(); ++a) weight /= factorial(beta[a]);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += weight * d[i] * d[i];
    }
    return out;
}

RatioSample gns_ratio(const Field& g, int m, const std::vector<MultiIndex>& tuple) {
    if (m < 1 || m > 5) throw InvalidArgument("gns_ratio order must satisfy 1 <= m <= 5");
    if (tuple.empty()) throw TupleOrderMismatch("gns_ratio needs a non-empty tuple");
    int order = 0;
    for (const auto& l : tuple) {
        for (int a = 0; a < kMaxDim; ++a) {
            if (l[a] < 0 || (a >= g.grid.dim() && l[a] != 0))
                throw TupleOrderMismatch("multi-index entries must be non-negative and match the dimension");
            order += l[a];
        }
    }
    if (order != m) throw TupleOrderMismatch("tuple orders sum to " + std::to_string(order) + ", expected " + std::to_string(m));
    require_positive(g);

    const Field gp = padded(g);
    const int k = static_cast<int>(tuple.size());
    const auto hat = forward_transform(gp);
    Field prod(gp.grid, 1.0);
    for (const auto& l : tuple) {
        auto h = hat;
        partial_inplace(h, l);
        const Field d = inverse_transform(h);
        for (std::size_t i = 0; i < prod.size(); ++i) prod[i] *= d[i] * d[i];
    }
    const Field top = tensor_norm_sq(gp, m);
    const Field grad = tensor_norm_sq(gp, 1);
    double lhs = 0.0, rhs_a = 0.0, rhs_b = 0.0;
    for (std::size_t i = 0; i < gp.size(); ++i) {
        const double gi = gp[i];
        lhs += std::pow(gi, 1.0 - 2.0 * k) * prod[i];
        rhs_a += top[i] / gi;
        rhs_b += std::pow(grad[i], m) / std::pow(gi, 2.0 * m - 1.0);
    }
    const double h_d = gp.grid.cell_volume();
    return make_sample(lhs * h_d, (rhs_a + rhs_b) * h_d);
}

RatioSample commutator_ratio(const std::vector<Field>& v, const Field& f, double s, double eps) {
    if (!(s >= 0.0)) throw InvalidArgument("commutator order s must be >= 0");
    if (!(eps > 0.0)) throw InvalidArgument("commutator eps must be > 0");
    const Grid& g = f.grid;
    const int d = g.dim();
    if (static_cast<int>(v.size()) != d) throw InvalidArgument("v needs one component per dimension");
    for (const auto& c : v) require_same_grid(g, c.grid);

    const Field fp = padded(f);
    std::vector<Field> vp;
    for (const auto& c : v) vp.push_back(padded(c));
    const auto grad_f = gradient(fp);
    const auto grad_lf = gradient(riesz_power(fp, s));
    Field transport(fp.grid), transport_l(fp.grid);
    for (int a = 0; a < d; ++a)
        for (std::size_t i = 0; i < fp.size(); ++i) {
            transport[i] += vp[a][i] * grad_f[a][i];
            transport_l[i] += vp[a][i] * grad_lf[a][i];
        }
    const double lhs = l2_norm(riesz_power(transport, s) - transport_l);

    const double order = 0.5 * d + 1.0 + s + eps;
    double v_norm_sq = 0.0;
    for (const auto& c : v) {
        const double n = sobolev_norm(c, order);
        v_norm_sq += n * n;
    }
    return make_sample(lhs, std::sqrt(v_norm_sq) * sobolev_norm(f, s));
}

RatioSample power_sobolev_ratio(const Field& g, double beta, int k) {
    if (!(beta > 0.0)) throw InvalidArgument("power_sobolev_ratio needs beta > 0");
    if (k < 1) throw InvalidArgument("power_sobolev_ratio needs k >= 1");
    require_positive(g);
    const Field gp = padded(g);
    const Field power = map(gp, [beta](double x) { return std::pow(x, beta); });
    const double lhs_norm = homogeneous_sobolev_norm(power, k);
    const Field top = tensor_norm_sq(gp, k);
    const Field grad = tensor_norm_sq(gp, 1);
    double weighted = 0.0, log_grad_max = 0.0;
    for (std::size_t i = 0; i < gp.size(); ++i) {
        weighted += std::pow(gp[i], 2.0 * (beta - 1.0)) * top[i];
        log_grad_max = std::max(log_grad_max, std::sqrt(grad[i]) / gp[i]);
    }
    weighted *= gp.grid.cell_volume();
    const double power_l2 = l2_norm(power);
    const double rhs = weighted + std::pow(log_grad_max, 2.0 * k) * power_l2 * power_l2;
    return make_sample(lhs_norm * lhs_norm, rhs);
}

std::vector<MultiIndex> default_gns_tuple(int m) {
    if (m == 1) return {MultiIndex{1, 0}};
    return {MultiIndex{1, 0}, MultiIndex{m - 1, 0}};
}

const char* to_string(Inequality i) {
    switch (i) {
        case Inequality::Gns: return "gns";
        case Inequality::Commutator: return "commutator";
        case Inequality::Power: return "power";
    }
    return "?";
}

Inequality inequality_from_string(const std::string& s) {
    if (s == "gns") return Inequality::Gns;
    if (s == "commutator") return Inequality::Commutator;
    if (s == "power") return Inequality::Power;
    throw InvalidArgument("unknown inequality '" + s + "'");
}

SweepSummary sweep(const TestFunctionSpec& spec, Inequality which, std::size_t trials, const SweepParams& params,
                   std::uint64_t first_trial) {
    if (trials < 1) throw InvalidArgument("sweep needs trials >= 1");
    spec.validate();
    std::vector<MultiIndex> tuple = params.tuple;
    if (tuple.empty() && which == Inequality::Gns) tuple = default_gns_tuple(params.m);

    SweepSummary out;
    out.which = which;
    out.trials = trials;
    out.samples.resize(trials);
    parallel_chunks(trials, [&](std::size_t t) {
        const std::uint64_t trial = first_trial + t;
        RatioSample s;
        switch (which) {
            case Inequality::Gns: s = gns_ratio(generate_test_function(spec, trial), params.m, tuple); break;
            case Inequality::Power:
                s = power_sobolev_ratio(generate_test_function(spec, trial), params.beta, params.k);
                break;
            case Inequality::Commutator: {
                const Grid g = spec.grid();
                Philox rng(spec.seed, trial);
                std::vector<Field> v;
                for (int a = 0; a < g.dim(); ++a) v.push_back(random_trig_polynomial(g, spec.cutoff, 1.0, rng));
                const Field f = random_trig_polynomial(g, spec.cutoff, 1.0, rng);
                s = commutator_ratio(v, f, params.s, params.eps);
                break;
            }
        }
        s.trial = trial;
        out.samples[t] = s;
    });

    std::vector<double> ratios;
    for (std::size_t t = 0; t < trials; ++t) {
        const auto& s = out.samples[t];
        if (!s.ratio) {
            ++out.skipped;
            continue;
        }
        const double r = *s.ratio;
        if (ratios.empty() || r > out.max_ratio) {
            out.max_ratio = r;
            out.argmax_trial = s.trial;
        }
        ratios.push_back(r);
        if (t < 100) {
            out.early_max = std::max(out.early_max, r);
        } else if (r > 10.0 * out.early_max && out.bounded) {
            out.bounded = false;
            out.finding = "trial " + std::to_string(s.trial) + " ratio " + std::to_string(r) +
                          " exceeds ten times the first-100 maximum " + std::to_string(out.early_max);
        }
    }
    if (!ratios.empty()) {
        std::sort(ratios.begin(), ratios.end());
        const std::size_t n = ratios.size();
        out.median_ratio = n % 2 == 1 ? ratios[n / 2] : 0.5 * (ratios[n / 2 - 1] + ratios[n / 2]);
    }
    return out;
}

}  // namespace erz
