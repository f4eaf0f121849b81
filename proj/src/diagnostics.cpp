#include "erz/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "erz/spectral.hpp"

namespace erz {

namespace {

// Displacement x - x0 wrapped into [-L/2, L/2).
double wrapped(double x, double x0, double length) {
    double r = std::fmod(x - x0 + 0.5 * length, length);
    if (r < 0.0) r += length;
    return r - 0.5 * length;
}

double interaction_energy(const Field& rho, double alpha) {
    const auto hat = forward_transform(rho);
    const Grid& g = rho.grid;
    const double s = alpha - g.dim();
    double acc = 0.0;
    for (std::size_t i = 0; i < hat.coeffs.size(); ++i) {
        const double k_sq = g.wavenumber_sq(i);
        if (k_sq == 0.0) continue;
        acc += std::pow(k_sq, 0.5 * s) * std::norm(hat.coeffs[i]);
    }
    return 0.5 * acc * g.volume();
}

double internal_energy(const Field& rho, double gamma) {
    double acc = 0.0;
    if (gamma == 1.0) {
        for (double r : rho.values) {
            if (!(r > 0.0)) throw NonPositiveDensity(r);
            acc += r * std::log(r);
        }
        return acc * rho.grid.cell_volume();
    }
    // Negative round-off undershoots carry no internal energy.
    for (double r : rho.values) acc += std::pow(std::max(r, 0.0), gamma);
    return acc * rho.grid.cell_volume() / (gamma - 1.0);
}

}  // namespace

double max_velocity_gradient(const std::vector<Field>& u) {
    double m = 0.0;
    for (const auto& c : u)
        for (const auto& d : gradient(c)) m = std::max(m, d.max_abs());
    return m;
}

EnergyReport energy_report(const FlowState& s, const SimParams& p, const DiagnosticsFrame& frame) {
    const Field rho = density(s, p.gamma);
    const Grid& g = rho.grid;
    const int d = g.dim();
    const double h_d = g.cell_volume();
    const double length = g.box_length();

    std::array<double, kMaxDim> x0{};
    for (int a = 0; a < d; ++a) x0[a] = frame.center ? (*frame.center)[a] : 0.5 * length;

    EnergyReport r;
    r.dim = d;
    r.t = s.t;
    double rho_c_max = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) rho_c_max = std::max(rho_c_max, std::abs(rho[i] - frame.background));
    const double level = frame.support_level * rho_c_max;

    for (std::size_t i = 0; i < g.size(); ++i) {
        const double rv = rho[i];
        const double rc = rv - frame.background;
        r.mass += rv;
        double u_sq = 0.0;
        double r_sq = 0.0;
        double u_dot_x = 0.0;
        double extent = 0.0;
        for (int a = 0; a < d; ++a) {
            const double ua = s.velocity[a][i];
            const double xa = wrapped(g.coordinate(i, a), x0[a], length);
            r.momentum[a] += rv * ua;
            u_sq += ua * ua;
            r_sq += xa * xa;
            u_dot_x += ua * xa;
            extent = std::max(extent, std::abs(xa));
        }
        r.kinetic += 0.5 * rv * u_sq;
        r.deviation_mass += rc;
        r.inertia += 0.5 * rc * r_sq;
        r.virial += rc * u_dot_x;
        if (std::abs(rc) > level && rho_c_max > 0.0) r.support_extent = std::max(r.support_extent, extent);
    }
    r.mass *= h_d;
    r.deviation_mass *= h_d;
    for (int a = 0; a < d; ++a) r.momentum[a] *= h_d;
    r.kinetic *= h_d;
    r.inertia *= h_d;
    r.virial *= h_d;

    r.internal = internal_energy(rho, p.gamma);
    r.interaction = interaction_energy(rho, p.alpha);
    const double offset = periodic_kernel_offset(p.alpha, d, length);
    r.interaction_free = std::isfinite(offset)
                             ? r.interaction - 0.5 * offset * r.deviation_mass * r.deviation_mass
                             : r.interaction;
    r.total = r.kinetic + p.cp * r.internal - p.ck * r.interaction;
    r.total_free = r.kinetic + p.cp * r.internal - p.ck * r.interaction_free;
    r.j_functional = j_functional(s.t, r.total_free, r.virial, r.inertia);
    r.max_grad_u = max_velocity_gradient(s.velocity);
    r.min_rho = rho.min();
    r.surrogate_valid = r.support_extent + frame.boundary_margin < 0.5 * length;
    return r;
}

double j_functional(double t, double energy, double virial, double inertia) {
    return energy * (t + 1.0) * (t + 1.0) - virial * (t + 1.0) + inertia;
}

double virial_rhs(const EnergyReport& r, const SimParams& p) {
    const double d = r.dim;
    double out = 2.0 * r.kinetic + p.cp * d * (p.gamma - 1.0) * r.internal - p.alpha * p.ck * r.interaction_free;
    if (p.gamma == 1.0) out += p.cp * d * r.mass;
    return out;
}

double c0_constant(double mass, double gamma, int dim) {
    if (!(mass > 0.0)) throw InvalidArgument("c0 needs positive mass");
    const double d = dim;
    const double ball = std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
    const double e = 0.5 * ((d + 2.0) * gamma - d);
    return std::pow(ball, 1.0 - gamma) * std::pow(mass, e) / std::pow(2.0, e * (gamma - 1.0));
}

double c_eps_constant(double eps, int dim) {
    if (!(eps > 0.0)) throw InvalidArgument("C_eps needs eps > 0");
    return std::exp(-1.0) * std::pow(2.0 * kPi * eps, 0.5 * dim);
}

double c_dg(int dim, double gamma) { return std::max(2.0, dim * (gamma - 1.0)); }

double c_dga(int dim, double gamma, double alpha) { return std::max(c_dg(dim, gamma), alpha); }

double riesz_kernel_constant(double alpha, int dim) {
    const double d = dim;
    return std::pow(kPi, 0.5 * d) * std::pow(2.0, d - alpha) * std::tgamma(0.5 * (d - alpha)) /
           std::tgamma(0.5 * alpha);
}

namespace {

// Dirichlet beta sum_n (-1)^n (2n+1)^{-s}, s > 0, by Cohen-Rodriguez Villegas-Zagier acceleration.
double dirichlet_beta(double s) {
    const int n = 40;
    double d = std::pow(3.0 + std::sqrt(8.0), n);
    d = 0.5 * (d + 1.0 / d);
    double b = -1.0, c = -d, sum = 0.0;
    for (int k = 0; k < n; ++k) {
        c = b - c;
        sum += c * std::pow(2.0 * k + 1.0, -s);
        b = (k + n) * (k - n) * b / ((k + 0.5) * (k + 1.0));
    }
    return sum / d;
}

}  // namespace

double periodic_kernel_offset(double alpha, int dim, double box_length) {
    const double k0 = 2.0 * kPi / box_length;
    if (alpha == 0.0) return std::numeric_limits<double>::quiet_NaN();
    if (dim == 1) return 2.0 / box_length * std::pow(k0, alpha - 1.0) * std::riemann_zeta(1.0 - alpha);
    if (dim == 2) {
        const double h = 1.0 - 0.5 * alpha;
        if (!(h > 0.0)) return std::numeric_limits<double>::quiet_NaN();
        const double z = 4.0 * std::riemann_zeta(h) * dirichlet_beta(h);
        return std::pow(k0, alpha - 2.0) * z / (box_length * box_length);
    }
    throw InvalidArgument("periodic_kernel_offset supports d = 1 or 2");
}

const char* to_string(Criterion c) {
    switch (c) {
        case Criterion::Attractive: return "attractive";
        case Criterion::Repulsive: return "repulsive";
        case Criterion::Isothermal: return "isothermal";
    }
    return "?";
}

Criterion criterion_from_string(const std::string& s) {
    if (s == "attractive") return Criterion::Attractive;
    if (s == "repulsive") return Criterion::Repulsive;
    if (s == "isothermal") return Criterion::Isothermal;
    throw InvalidArgument("unknown criterion '" + s + "'");
}

double BoundCurve::operator()(double t) const {
    if (kind == Kind::Quadratic) return c0 + c1 * t + c2 * t * t;
    return c0 * std::exp(t) + 0.5 * c1 * (std::exp(t) - std::exp(-t)) + c2;
}

namespace {

void fill_inputs(BlowupCertificate& c, const EnergyReport& r, const SimParams& p) {
    c.inputs = {{"d", static_cast<double>(r.dim)},
                {"gamma", p.gamma},
                {"alpha", p.alpha},
                {"cp", p.cp},
                {"ck", p.ck},
                {"mass", r.mass},
                {"E_u", r.kinetic},
                {"E_int", r.internal},
                {"E_K", r.interaction},
                {"E_total", r.total},
                {"E_free", r.total_free},
                {"I0", r.inertia},
                {"W0", r.virial},
                {"J0", r.j_functional}};
}

bool all_finite(const EnergyReport& r) {
    for (double v : {r.mass, r.kinetic, r.internal, r.interaction, r.total, r.total_free, r.inertia, r.virial})
        if (!std::isfinite(v)) return false;
    return true;
}

Condition make(std::string name, double lhs, const char* rel, double rhs) {
    Condition c;
    c.name = std::move(name);
    c.lhs = lhs;
    c.rhs = rhs;
    c.relation = rel;
    const std::string op = rel;
    if (op == "<") c.satisfied = lhs < rhs;
    else if (op == "<=") c.satisfied = lhs <= rhs;
    else if (op == ">") c.satisfied = lhs > rhs;
    else c.satisfied = lhs >= rhs;
    return c;
}

void finish(BlowupCertificate& c) {
    c.hypotheses_satisfied = std::all_of(c.conditions.begin(), c.conditions.end(),
                                         [](const Condition& x) { return x.satisfied; });
}

// First t >= 0 where pred becomes true, searched on a geometric grid and
// refined by bisection. Returns nothing if pred stays false up to t_max.
template <typename Pred>
std::optional<double> first_time(Pred pred, double t_max = 1e12) {
    if (pred(0.0)) return 0.0;
    double lo = 0.0;
    double hi = 1e-6;
    while (hi <= t_max) {
        if (pred(hi)) {
            for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
                const double mid = 0.5 * (lo + hi);
                (pred(mid) ? hi : lo) = mid;
            }
            return hi;
        }
        lo = hi;
        hi *= 1.25;
    }
    return std::nullopt;
}

}  // namespace

BlowupCertificate check_attractive(const EnergyReport& r0, const SimParams& p) {
    if (!(p.ck > 0.0)) throw WrongRegime("attractive criterion needs ck > 0");
    if (!(p.gamma > 1.0)) throw WrongRegime("attractive criterion needs gamma > 1");
    BlowupCertificate c;
    c.criterion = Criterion::Attractive;
    fill_inputs(c, r0, p);
    const double cdg = c_dg(r0.dim, p.gamma);
    c.constants["c_dg"] = cdg;
    c.conditions.push_back(make("alpha >= max(2, d(gamma-1))", p.alpha, ">=", cdg));
    c.conditions.push_back(make("E_free(0) < 0", r0.total_free, "<", 0.0));
    c.conditions.push_back(make("initial functionals finite", all_finite(r0) ? 1.0 : 0.0, ">=", 1.0));
    finish(c);
    c.bound_curve = {BoundCurve::Kind::Quadratic, r0.inertia, r0.virial, 0.5 * cdg * r0.total_free};
    if (c.hypotheses_satisfied) {
        const double a = -cdg * r0.total_free;
        c.predicted_bound_time = (r0.virial + std::sqrt(r0.virial * r0.virial + 2.0 * a * r0.inertia)) / a;
    }
    if (p.ck != 1.0) c.notes.push_back("ck != 1 is absorbed into the interaction energy");
    return c;
}

BlowupCertificate check_repulsive(const EnergyReport& r0, const SimParams& p) {
    if (!(p.ck < 0.0)) throw WrongRegime("repulsive criterion needs ck < 0");
    const int d = r0.dim;
    const double upper = 1.0 + 2.0 / d;
    if (!(p.gamma > 1.0) || p.gamma > upper * (1.0 + 1e-12))
        throw WrongRegime("repulsive criterion needs 1 < gamma <= 1 + 2/d");
    if (!(p.cp > 0.0)) throw WrongRegime("repulsive criterion needs cp > 0");

    BlowupCertificate c;
    c.criterion = Criterion::Repulsive;
    fill_inputs(c, r0, p);
    const double cdga = c_dga(d, p.gamma, p.alpha);
    const double c0 = c0_constant(r0.mass, p.gamma, d);
    const double expo = 0.5 * d * (p.gamma - 1.0);
    const double e0 = r0.total_free;
    c.constants["c_dga"] = cdga;
    c.constants["c0"] = c0;
    const double threshold = 2.0 * p.cp * c0 / (cdga * e0);
    c.constants["threshold"] = threshold;
    // Large-time limit of the two bounds on J; agrees with the threshold above
    // when d(gamma-1)/2 = 1.
    c.constants["asymptotic_threshold"] = p.cp * c0 / std::pow(0.5 * cdga * e0, expo);

    c.conditions.push_back(make("alpha >= d(gamma-1)", p.alpha, ">=", d * (p.gamma - 1.0)));
    c.conditions.push_back(make("E_free(0) > 0", e0, ">", 0.0));
    c.conditions.push_back(make("J(0) < 2 cp c0 / (c_dga E_free(0))", r0.j_functional, "<", threshold));
    c.conditions.push_back(make("initial functionals finite", all_finite(r0) ? 1.0 : 0.0, ">=", 1.0));
    finish(c);
    c.bound_curve = {BoundCurve::Kind::Quadratic, r0.inertia, r0.virial, 0.5 * cdga * e0};

    if (c.hypotheses_satisfied) {
        const double j0 = r0.j_functional;
        const auto contradiction = [&](double t) {
            const double q = c.bound_curve(t);
            if (!(q > 0.0)) return true;
            if (!(j0 > 0.0)) return true;
            const double lhs = std::log(j0) + (2.0 - 2.0 * expo) * std::log1p(t);
            const double rhs = std::log(p.cp * c0) + 2.0 * std::log1p(t) - expo * std::log(q);
            return lhs < rhs;
        };
        c.predicted_bound_time = first_time(contradiction);
        if (!c.predicted_bound_time)
            c.notes.push_back("the J bounds never cross; J(0) is above the asymptotic threshold");
    }
    return c;
}

BlowupCertificate check_isothermal(const EnergyReport& r0, const SimParams& p, double eps) {
    if (p.gamma != 1.0) throw WrongRegime("isothermal criterion needs gamma = 1");
    if (p.cp != 1.0) throw WrongRegime("isothermal criterion is stated for cp = 1");
    if (p.ck == 0.0) throw WrongRegime("isothermal criterion needs ck != 0");
    if (!(eps > 0.0)) throw InvalidArgument("entropy-splitting parameter must be > 0");

    BlowupCertificate c;
    c.criterion = Criterion::Isothermal;
    fill_inputs(c, r0, p);
    const int d = r0.dim;
    const bool attractive = p.ck > 0.0;
    const double used_eps = (!attractive && p.alpha >= 0.0) ? std::max({eps, 2.0, p.alpha}) : 2.0;
    const double c_eps = c_eps_constant(used_eps, d);
    const double c_tilde = used_eps * r0.total_free + d * r0.mass + c_eps;
    c.constants["eps"] = used_eps;
    c.constants["C_eps"] = c_eps;
    c.constants["C_tilde"] = c_tilde;

    if (attractive) c.conditions.push_back(make("alpha >= 2", p.alpha, ">=", 2.0));
    const double lhs = r0.virial + r0.inertia + c_tilde;
    c.conditions.push_back(make("W(0) + I(0) + C_tilde < 0", lhs, "<", 0.0));
    c.conditions.push_back(make("initial functionals finite", all_finite(r0) ? 1.0 : 0.0, ">=", 1.0));
    finish(c);

    // I(t) <= (I0 + C~) e^t + (e^t - e^-t)/2 (W0 - I0 - C~) - C~
    const double b = r0.virial - r0.inertia - c_tilde;
    c.bound_curve = {BoundCurve::Kind::Exponential, r0.inertia + c_tilde, b, -c_tilde};
    if (c.hypotheses_satisfied) {
        // With y = e^t the curve vanishes where P y^2 - C~ y - B/2 = 0, P < 0.
        const double pp = 0.5 * lhs;
        const double disc = c_tilde * c_tilde + 2.0 * pp * b;
        const double y = (c_tilde - std::sqrt(std::max(disc, 0.0))) / (2.0 * pp);
        c.predicted_bound_time = std::log(std::max(y, 1.0));
    }
    return c;
}

BlowupCertificate check_criterion(Criterion c, const EnergyReport& r0, const SimParams& p) {
    switch (c) {
        case Criterion::Attractive: return check_attractive(r0, p);
        case Criterion::Repulsive: return check_repulsive(r0, p);
        case Criterion::Isothermal: return check_isothermal(r0, p);
    }
    throw InvalidArgument("unknown criterion");
}

JDecayResult j_decay_check(const std::vector<EnergyReport>& series, const SimParams& p, double slack) {
    JDecayResult out;
    if (series.empty()) return out;
    const double j0 = series.front().j_functional;
    const double t0 = series.front().t;
    const double expo = 2.0 - series.front().dim * (p.gamma - 1.0);
    for (const auto& r : series) {
        const double bound = j0 * std::pow(r.t - t0 + 1.0, expo);
        const double ratio = r.j_functional / bound;
        if (ratio > out.worst_ratio || &r == &series.front()) {
            out.worst_ratio = ratio;
            out.worst_time = r.t;
        }
        if (r.j_functional > bound + slack * std::abs(bound)) out.holds = false;
    }
    return out;
}

bool cauchy_schwarz_check(const EnergyReport& r, double rel_tol) {
    const double lhs = r.virial * r.virial;
    const double rhs = 4.0 * r.kinetic * r.inertia;
    return lhs <= rhs * (1.0 + rel_tol) + std::numeric_limits<double>::min();
}

}  // namespace erz
