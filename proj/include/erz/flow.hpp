#pragma once

#include <string>
#include <vector>

#include "erz/field.hpp"

namespace erz {

enum class Formulation { Primitive, IsentropicQ, IsothermalQ };

const char* to_string(Formulation f);
Formulation formulation_from_string(const std::string& s);

/// Thresholds of the blow-up guards checked after every step.
struct GuardSettings {
    /// Trip when max |d_j u_i| exceeds grad_u_factor * (initial value + 1).
    double grad_u_factor = 1e3;
    double density_floor = 1e-8;
    /// Fraction of non-mean spectral energy in the top sixth of the retained band.
    double tail_ratio = 1e-2;
    /// Absolute gradient threshold; run() resolves it from the initial state when <= 0.
    double grad_u_limit = 0.0;
};

/// Physical and numerical parameters of a nonlinear run.
struct SimParams {
    Formulation formulation = Formulation::Primitive;
    double cp = 0.0;
    double ck = 0.0;
    double alpha = 0.5;
    double gamma = 1.0;
    double eps = 0.0;
    double dt = 1e-3;
    double t_end = 1.0;
    bool dealias = true;
    double cfl_safety = 0.5;
    GuardSettings guards;
    /// Accept any alpha in (d-2, d+2) instead of the interaction range (d-2, d).
    /// The blow-up criteria assume alpha >= 2, which only fits the
    /// interaction range for d >= 3; their multiplier |k|^{alpha-d} is still
    /// well defined for larger alpha.
    bool extended_alpha = false;

    /// gamma~ = (gamma - 1)/2
    double gamma_tilde() const { return 0.5 * (gamma - 1.0); }
    /// ck~ = ck * gamma~^{1/gamma~} for the isentropic q-form, ck otherwise.
    double ck_tilde() const;

    /// Throws InvalidArgument listing the first violated constraint.
    void validate(int dim) const;
};

/// Fields of one formulation: the scalar is rho (primitive), q = rho^g~/g~
/// (isentropic) or q = ln rho (isothermal).
struct FlowState {
    Formulation formulation = Formulation::Primitive;
    Field scalar;
    std::vector<Field> velocity;
    double t = 0.0;

    FlowState(Formulation f, Field s, std::vector<Field> u, double time = 0.0);

    const Grid& grid() const { return scalar.grid; }
    int dim() const { return scalar.grid.dim(); }
};

Field to_q(const Field& rho, double gamma);
Field from_q(const Field& q, double gamma);

/// Density of a state in any formulation.
Field density(const FlowState& s, double gamma);

/// The same physical state expressed in another formulation.
FlowState convert(const FlowState& s, Formulation target, double gamma);

}  // namespace erz
