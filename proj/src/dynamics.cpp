#include "erz/dynamics.hpp"

#include <cmath>
#include <sstream>

#include "erz/linear.hpp"
#include "erz/log.hpp"
#include "erz/spectral.hpp"

namespace erz {

const char* to_string(GuardKind k) {
    switch (k) {
        case GuardKind::MaxGradU: return "max_grad_u";
        case GuardKind::DensityFloor: return "density_floor";
        case GuardKind::SpectralTail: return "spectral_tail";
    }
    return "?";
}

const char* to_string(Termination t) {
    switch (t) {
        case Termination::Completed: return "completed";
        case Termination::GuardTripped: return "guard_tripped";
        case Termination::NonFinite: return "non_finite";
    }
    return "?";
}

namespace {

std::string describe(GuardKind kind, double value, double threshold, double t) {
    std::ostringstream os;
    os << "guard " << to_string(kind) << " tripped at t = " << t << " (value " << value << ", threshold " << threshold
       << ")";
    return os.str();
}

}  // namespace

GuardTripped::GuardTripped(GuardKind k, double v, double th, FlowState s)
    : Error(describe(k, v, th, s.t)), kind(k), value(v), threshold(th), state(std::move(s)) {}

namespace {

// Scalar plus velocity components as one flat list for the RK stages.
using Stage = std::vector<Field>;

Stage pack(const FlowState& s) {
    Stage out;
    out.reserve(s.velocity.size() + 1);
    out.push_back(s.scalar);
    for (const auto& c : s.velocity) out.push_back(c);
    return out;
}

FlowState unpack(Formulation f, Stage st, double t) {
    Field scalar = std::move(st.front());
    std::vector<Field> u(std::make_move_iterator(st.begin() + 1), std::make_move_iterator(st.end()));
    return FlowState(f, std::move(scalar), std::move(u), t);
}

Field finalize(SpectralField hat, bool dealiased) {
    if (dealiased) hat = dealias(std::move(hat));
    return inverse_transform(hat);
}

// d_i Lambda^{alpha-d} of a field, for every axis.
std::vector<Field> interaction_gradient(const Field& f, double alpha) {
    const Grid& g = f.grid;
    auto hat = forward_transform(f);
    riesz_power_inplace(hat, alpha - g.dim());
    std::vector<Field> out;
    for (int a = 0; a < g.dim(); ++a) {
        auto h = hat;
        MultiIndex beta{};
        beta[a] = 1;
        partial_inplace(h, beta);
        out.push_back(inverse_transform(h));
    }
    return out;
}

// Gradients of every velocity component: grad_u[i][j] = d_j u_i.
std::vector<std::vector<Field>> velocity_gradients(const std::vector<Field>& u) {
    std::vector<std::vector<Field>> out;
    for (const auto& c : u) out.push_back(gradient(c));
    return out;
}

Field transport(const std::vector<Field>& u, const std::vector<Field>& grad) {
    Field out(u[0].grid);
    for (std::size_t a = 0; a < u.size(); ++a)
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += u[a][i] * grad[a][i];
    return out;
}

}  // namespace

FlowState rhs(const FlowState& s, const SimParams& p) {
    const Grid& g = s.grid();
    const int d = g.dim();
    const auto& u = s.velocity;
    if (!s.scalar.all_finite()) throw NonFinite("rhs: non-finite scalar field");
    for (const auto& c : u)
        if (!c.all_finite()) throw NonFinite("rhs: non-finite velocity");

    const auto grad_u = velocity_gradients(u);
    const auto grad_s = gradient(s.scalar);

    // Velocity tendency: advection plus the formulation-specific forces.
    std::vector<Field> du;
    for (int i = 0; i < d; ++i) {
        Field t(g);
        for (int a = 0; a < d; ++a)
            for (std::size_t k = 0; k < g.size(); ++k) t[k] -= u[a][k] * grad_u[i][a][k];
        du.push_back(std::move(t));
    }

    Field ds(g);
    switch (s.formulation) {
        case Formulation::Primitive: {
            const Field& rho = s.scalar;
            // Mass equation in divergence form so the mean is conserved exactly.
            std::vector<Field> flux;
            for (int a = 0; a < d; ++a) flux.push_back(rho * u[a]);
            SpectralField div(g);
            for (int a = 0; a < d; ++a) {
                auto h = forward_transform(flux[a]);
                MultiIndex beta{};
                beta[a] = 1;
                partial_inplace(h, beta);
                for (std::size_t k = 0; k < h.coeffs.size(); ++k) div.coeffs[k] -= h.coeffs[k];
            }
            ds = finalize(std::move(div), p.dealias);
            if (p.cp != 0.0) {
                const double floor = rho.min();
                if (!(floor > 0.0)) throw NonPositiveDensity(floor);
                const double c = p.cp * p.gamma;
                for (std::size_t k = 0; k < g.size(); ++k) {
                    const double w = c * std::pow(rho[k], p.gamma - 2.0);
                    for (int i = 0; i < d; ++i) du[i][k] -= w * grad_s[i][k];
                }
            }
            if (p.ck != 0.0) {
                const auto f = interaction_gradient(rho, p.alpha);
                for (int i = 0; i < d; ++i) axpy(p.ck, f[i], du[i]);
            }
            break;
        }
        case Formulation::IsentropicQ: {
            const Field& q = s.scalar;
            const double gt = p.gamma_tilde();
            const Field div_u = divergence(u);
            Field t = transport(u, grad_s);
            for (std::size_t k = 0; k < g.size(); ++k) ds[k] = -t[k] - gt * q[k] * div_u[k];
            ds = finalize(forward_transform(ds), p.dealias);
            if (p.cp != 0.0) {
                const double c = p.cp * p.gamma * gt;
                for (std::size_t k = 0; k < g.size(); ++k)
                    for (int i = 0; i < d; ++i) du[i][k] -= c * q[k] * grad_s[i][k];
            }
            if (p.ck != 0.0) {
                const double floor = q.min();
                if (!(floor > 0.0)) throw NonPositiveDensity(floor);
                const Field qp = map(q, [gt](double v) { return std::pow(v, 1.0 / gt); });
                const auto f = interaction_gradient(qp, p.alpha);
                for (int i = 0; i < d; ++i) axpy(p.ck_tilde(), f[i], du[i]);
            }
            break;
        }
        case Formulation::IsothermalQ: {
            const Field& q = s.scalar;
            const Field div_u = divergence(u);
            Field t = transport(u, grad_s);
            for (std::size_t k = 0; k < g.size(); ++k) ds[k] = -t[k] - div_u[k];
            ds = finalize(forward_transform(ds), p.dealias);
            for (int i = 0; i < d; ++i) axpy(-p.cp, grad_s[i], du[i]);
            if (p.ck != 0.0) {
                const auto f = interaction_gradient(map(q, [](double v) { return std::exp(v); }), p.alpha);
                for (int i = 0; i < d; ++i) axpy(p.ck, f[i], du[i]);
            }
            break;
        }
    }
    if (p.dealias)
        for (auto& c : du) c = dealias(c);

    FlowState out(s.formulation, std::move(ds), std::move(du), s.t);
    if (!out.scalar.all_finite()) throw NonFinite("rhs produced a non-finite tendency");
    for (const auto& c : out.velocity)
        if (!c.all_finite()) throw NonFinite("rhs produced a non-finite tendency");
    return out;
}

double cfl_limit(const FlowState& s, const SimParams& p) {
    double u_max = 0.0;
    for (const auto& c : s.velocity) u_max = std::max(u_max, c.max_abs());
    const Grid& g = s.grid();
    linear::LinearParams lp{p.cp * p.gamma, p.ck, p.alpha, g.dim()};
    std::vector<double> norms;
    for (int m = 1; m <= g.points() / 2; ++m) norms.push_back(m * g.k0());
    if (g.dim() == 2) norms.push_back(std::sqrt(2.0) * g.points() / 2 * g.k0());
    const double c_wave = linear::max_wave_speed(norms, lp);
    const double speed = u_max + c_wave;
    if (!(speed > 0.0)) return std::numeric_limits<double>::infinity();
    return p.cfl_safety * g.spacing() / speed;
}

double state_tail_ratio(const FlowState& s, bool dealiased) {
    TailEnergy acc;
    auto add = [&](const Field& f) {
        const auto e = spectral_tail_energy(f, dealiased);
        acc.tail += e.tail;
        acc.total += e.total;
    };
    add(s.scalar);
    for (const auto& c : s.velocity) add(c);
    if (!(acc.total > 0.0)) return 0.0;
    return acc.tail / acc.total;
}

void check_guards(const FlowState& s, const SimParams& p) {
    const auto& gs = p.guards;
    double rho_min = 0.0;
    switch (s.formulation) {
        case Formulation::Primitive: rho_min = s.scalar.min(); break;
        case Formulation::IsothermalQ: rho_min = std::exp(s.scalar.min()); break;
        case Formulation::IsentropicQ: {
            const double qmin = s.scalar.min();
            const double gt = p.gamma_tilde();
            rho_min = qmin > 0.0 ? std::pow(gt * qmin, 1.0 / gt) : 0.0;
            break;
        }
    }
    if (rho_min < gs.density_floor) throw GuardTripped(GuardKind::DensityFloor, rho_min, gs.density_floor, s);
    if (gs.grad_u_limit > 0.0) {
        const double gu = max_velocity_gradient(s.velocity);
        if (gu > gs.grad_u_limit) throw GuardTripped(GuardKind::MaxGradU, gu, gs.grad_u_limit, s);
    }
    const double tail = state_tail_ratio(s, p.dealias);
    if (tail > gs.tail_ratio) throw GuardTripped(GuardKind::SpectralTail, tail, gs.tail_ratio, s);
}

namespace {

void heat(Stage& st, double tau) {
    if (tau == 0.0) return;
    for (auto& f : st) f = heat_semigroup(f, tau);
}

Stage heated(Stage st, double tau) {
    heat(st, tau);
    return st;
}

// a + s*b, component-wise
Stage combine(const Stage& a, double s, const Stage& b) {
    Stage out = a;
    for (std::size_t i = 0; i < out.size(); ++i) axpy(s, b[i], out[i]);
    return out;
}

// A stage that leaves the positive cone counts as crossing the density floor.
Stage tendency(Formulation f, const Stage& st, double t, const SimParams& p) {
    FlowState s = unpack(f, st, t);
    try {
        return pack(rhs(s, p));
    } catch (const NonPositiveDensity& e) {
        throw GuardTripped(GuardKind::DensityFloor, e.min_value, p.guards.density_floor, std::move(s));
    }
}

}  // namespace

FlowState step(const FlowState& s, const SimParams& p, std::optional<double> dt_opt) {
    const double dt = dt_opt.value_or(p.dt);
    if (!(dt > 0.0)) throw InvalidArgument("step needs dt > 0");
    const Formulation f = s.formulation;
    const double half = 0.5 * p.eps * dt;
    const double full = p.eps * dt;
    const Stage u0 = pack(s);

    // Lawson RK4 with the heat semigroup as integrating factor.
    const Stage a = tendency(f, u0, s.t, p);
    const Stage ua = heated(combine(u0, 0.5 * dt, a), half);
    const Stage b = tendency(f, ua, s.t + 0.5 * dt, p);
    const Stage ub = combine(heated(u0, half), 0.5 * dt, b);
    const Stage c = tendency(f, ub, s.t + 0.5 * dt, p);
    const Stage uc = combine(heated(u0, full), dt, heated(c, half));
    const Stage dd = tendency(f, uc, s.t + dt, p);

    Stage bc = combine(b, 1.0, c);
    heat(bc, half);
    Stage next = heated(u0, full);
    const Stage ea = heated(a, full);
    for (std::size_t i = 0; i < next.size(); ++i) {
        axpy(dt / 6.0, ea[i], next[i]);
        axpy(dt / 3.0, bc[i], next[i]);
        axpy(dt / 6.0, dd[i], next[i]);
    }
    FlowState out = unpack(f, std::move(next), s.t + dt);
    if (!out.scalar.all_finite()) throw NonFinite("step produced a non-finite state");
    for (const auto& comp : out.velocity)
        if (!comp.all_finite()) throw NonFinite("step produced a non-finite state");
    check_guards(out, p);
    return out;
}

Field mollify_initial(const Field& f, double eps) {
    if (!(eps >= 0.0)) throw InvalidArgument("mollification parameter must be >= 0");
    if (eps == 0.0) return f;
    return heat_semigroup(f, 0.5 * eps * eps);
}

RunResult run(const FlowState& initial, SimParams p, const RunOptions& opts) {
    p.validate(initial.dim());
    if (opts.report_stride < 1) throw InvalidArgument("report_stride must be >= 1");
    if (opts.snapshot_stride < 0) throw InvalidArgument("snapshot_stride must be >= 0");
    if (p.guards.grad_u_limit <= 0.0)
        p.guards.grad_u_limit = p.guards.grad_u_factor * (max_velocity_gradient(initial.velocity) + 1.0);

    RunResult result{Termination::Completed, std::nullopt, "", initial, {}, 0, 0, p.guards.grad_u_limit};
    auto report = [&](const FlowState& st) {
        auto r = energy_report(st, p, opts.frame);
        if (opts.on_report) opts.on_report(r);
        result.series.push_back(std::move(r));
    };
    report(initial);
    if (opts.on_snapshot && opts.snapshot_stride > 0) opts.on_snapshot(initial, 0);

    const long total = p.t_end > 0.0 ? static_cast<long>(std::ceil(p.t_end / p.dt - 1e-9)) : 0;
    FlowState state = initial;
    const double t0 = initial.t;
    for (long n = 1; n <= total; ++n) {
        const double dt = n < total ? p.dt : p.t_end - (total - 1) * p.dt;
        if (dt > cfl_limit(state, p)) {
            if (result.cfl_warnings == 0)
                log::warn("dt exceeds the advisory CFL bound at t = " + std::to_string(state.t));
            ++result.cfl_warnings;
        }
        try {
            state = step(state, p, dt);
            // Times from the step count, so long runs do not accumulate round-off in t.
            state.t = n < total ? t0 + n * p.dt : t0 + p.t_end;
        } catch (const GuardTripped& g) {
            result.termination = Termination::GuardTripped;
            result.guard = g.kind;
            result.message = g.what();
            result.final_state = g.state;
            result.final_state.t = n < total ? t0 + n * p.dt : t0 + p.t_end;
            result.steps = n;
            try {
                report(result.final_state);
            } catch (const NonPositiveDensity&) {
                // The offending state may not admit the functionals (ln rho with rho <= 0).
            }
            if (opts.on_snapshot) opts.on_snapshot(result.final_state, n);
            return result;
        } catch (const NonFinite& e) {
            result.termination = Termination::NonFinite;
            result.message = e.what();
            result.final_state = state;
            result.steps = n - 1;
            return result;
        }
        result.steps = n;
        if (n % opts.report_stride == 0 || n == total) report(state);
        if (opts.on_snapshot && opts.snapshot_stride > 0 && (n % opts.snapshot_stride == 0 || n == total))
            opts.on_snapshot(state, n);
    }
    result.final_state = state;
    return result;
}

}  // namespace erz
