#include "erz/flow.hpp"

#include <cmath>

namespace erz {

const char* to_string(Formulation f) {
    switch (f) {
        case Formulation::Primitive: return "primitive";
        case Formulation::IsentropicQ: return "isentropic_q";
        case Formulation::IsothermalQ: return "isothermal_q";
    }
    return "?";
}

Formulation formulation_from_string(const std::string& s) {
    if (s == "primitive") return Formulation::Primitive;
    if (s == "isentropic_q") return Formulation::IsentropicQ;
    if (s == "isothermal_q") return Formulation::IsothermalQ;
    throw InvalidArgument("unknown formulation '" + s + "'");
}

double SimParams::ck_tilde() const {
    if (formulation != Formulation::IsentropicQ) return ck;
    const double gt = gamma_tilde();
    return ck * std::pow(gt, 1.0 / gt);
}

void SimParams::validate(int dim) const {
    if (!(cp >= 0.0)) throw InvalidArgument("cp must be >= 0");
    if (!std::isfinite(ck)) throw InvalidArgument("ck must be finite");
    if (!(gamma >= 1.0)) throw InvalidArgument("gamma must satisfy gamma >= 1");
    if (formulation == Formulation::IsentropicQ && !(gamma > 1.0))
        throw InvalidArgument("the isentropic q-form needs gamma > 1");
    if (formulation == Formulation::IsothermalQ && gamma != 1.0)
        throw InvalidArgument("the isothermal q-form needs gamma = 1");
    const double hi = extended_alpha ? dim + 2.0 : static_cast<double>(dim);
    if (!(alpha > dim - 2.0 && alpha < hi))
        throw InvalidArgument(extended_alpha ? "alpha must lie in (d-2, d+2)"
                                             : "alpha must lie in the open interval (d-2, d)");
    if (!(eps >= 0.0)) throw InvalidArgument("eps must be >= 0");
    if (!(dt > 0.0)) throw InvalidArgument("dt must be > 0");
    if (!(t_end >= 0.0)) throw InvalidArgument("t_end must be >= 0");
    if (!(cfl_safety > 0.0)) throw InvalidArgument("cfl_safety must be > 0");
    if (!(guards.grad_u_factor > 0.0) || !(guards.density_floor >= 0.0) || !(guards.tail_ratio > 0.0))
        throw InvalidArgument("guard thresholds must be positive");
}

FlowState::FlowState(Formulation f, Field s, std::vector<Field> u, double time)
    : formulation(f), scalar(std::move(s)), velocity(std::move(u)), t(time) {
    if (static_cast<int>(velocity.size()) != scalar.grid.dim())
        throw InvalidArgument("velocity needs one component per dimension");
    for (const auto& c : velocity) require_same_grid(scalar.grid, c.grid);
}

Field to_q(const Field& rho, double gamma) {
    if (!(gamma >= 1.0)) throw InvalidArgument("gamma must satisfy gamma >= 1");
    const double floor = rho.min();
    if (!(floor > 0.0)) throw NonPositiveDensity(floor);
    if (gamma == 1.0) return map(rho, [](double r) { return std::log(r); });
    const double gt = 0.5 * (gamma - 1.0);
    return map(rho, [gt](double r) { return std::pow(r, gt) / gt; });
}

Field from_q(const Field& q, double gamma) {
    if (!(gamma >= 1.0)) throw InvalidArgument("gamma must satisfy gamma >= 1");
    if (gamma == 1.0) return map(q, [](double v) { return std::exp(v); });
    const double floor = q.min();
    if (!(floor > 0.0)) throw NonPositiveDensity(floor);
    const double gt = 0.5 * (gamma - 1.0);
    return map(q, [gt](double v) { return std::pow(gt * v, 1.0 / gt); });
}

Field density(const FlowState& s, double gamma) {
    switch (s.formulation) {
        case Formulation::Primitive: return s.scalar;
        case Formulation::IsentropicQ: return from_q(s.scalar, gamma);
        case Formulation::IsothermalQ: return from_q(s.scalar, 1.0);
    }
    return s.scalar;
}

FlowState convert(const FlowState& s, Formulation target, double gamma) {
    if (s.formulation == target) return s;
    Field rho = density(s, gamma);
    Field scalar = target == Formulation::Primitive     ? rho
                   : target == Formulation::IsothermalQ ? to_q(rho, 1.0)
                                                        : to_q(rho, gamma);
    return FlowState(target, std::move(scalar), s.velocity, s.t);
}

}  // namespace erz
