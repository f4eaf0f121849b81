#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "erz/flow.hpp"

namespace erz {

/// Where the moment functionals are centred and how the compact-support
/// surrogate is judged on the torus.
struct DiagnosticsFrame {
    /// Background density rho_inf subtracted before taking moments.
    double background = 0.0;
    /// Centre x0; defaults to the box centre when empty.
    std::optional<std::array<double, kMaxDim>> center;
    /// The surrogate is valid while the support of rho - rho_inf stays this far
    /// (in length units) from the box faces.
    double boundary_margin = 0.0;
    /// Relative level defining the support: |rho - rho_inf| > level * max |rho - rho_inf|.
    double support_level = 1e-4;
};

/// Conserved and virial functionals of one state.
struct EnergyReport {
    int dim = 1;
    double t = 0.0;
    double mass = 0.0;
    std::array<double, kMaxDim> momentum{};
    double kinetic = 0.0;      // E_u = 1/2 int rho |u|^2
    double internal = 0.0;     // int rho^g/(g-1), or int rho ln rho when g = 1
    double interaction = 0.0;  // E_K = 1/2 int rho Lambda^{alpha-d} rho
    /// Free-space surrogate of E_K for the deviation density: E_K - C_L M_c^2 / 2,
    /// removing the constant that periodic images add to the kernel near the origin
    /// (see periodic_kernel_offset). Equals E_K when the offset is undefined.
    double interaction_free = 0.0;
    double deviation_mass = 0.0;  // M_c = int (rho - rho_inf)
    double total = 0.0;        // E_u + cp E_int - ck E_K
    /// E_u + cp E_int - ck interaction_free: the energy entering the virial
    /// identities, J and the blow-up certificates.
    double total_free = 0.0;
    double inertia = 0.0;      // I = 1/2 int (rho - rho_inf) |x - x0|^2
    double virial = 0.0;       // W = int (rho - rho_inf) u.(x - x0)
    double j_functional = 0.0;
    double max_grad_u = 0.0;
    double min_rho = 0.0;
    double support_extent = 0.0;
    bool surrogate_valid = true;
};

EnergyReport energy_report(const FlowState& s, const SimParams& p, const DiagnosticsFrame& frame = {});

/// max_{i,j} |d_j u_i|
double max_velocity_gradient(const std::vector<Field>& u);

/// J(t) = E (t+1)^2 - W (t+1) + I, evaluated by energy_report with E = total_free.
double j_functional(double t, double energy, double virial, double inertia);

/// d^2 I/dt^2 = 2 E_u + cp d (g-1) E_int + cp d [g = 1] M - alpha ck E_K, with
/// E_K taken as its free-space surrogate `interaction_free`.
double virial_rhs(const EnergyReport& r, const SimParams& p);

/// Constant of the lower bound E_int >= c0 I^{-d(g-1)/2}.
double c0_constant(double mass, double gamma, int dim);

/// C_eps = e^{-1} (2 pi eps)^{d/2}
double c_eps_constant(double eps, int dim);

/// max(2, d(g-1))
double c_dg(int dim, double gamma);
/// max(2, d(g-1), alpha)
double c_dga(int dim, double gamma, double alpha);

/// Free-space Riesz kernel constant: Lambda^{alpha-d} is convolution with
/// |x|^{-alpha} / kappa(alpha, d).
double riesz_kernel_constant(double alpha, int dim);

/// Constant C_L in the expansion of the mean-free periodic kernel of
/// Lambda^{alpha-d} on a box of length L near the origin:
///   G_L(x) = |x|^{-alpha} / kappa + C_L + O(|x|^2).
/// 1D: (2/L) (2 pi/L)^{alpha-1} zeta(1-alpha). 2D: L^{-2} (2 pi/L)^{alpha-2} Z(2-alpha)
/// with the square-lattice sum Z(s) = 4 zeta(s/2) beta(s/2). NaN where the
/// kernel is logarithmic (alpha = 0).
double periodic_kernel_offset(double alpha, int dim, double box_length);

enum class Criterion { Attractive, Repulsive, Isothermal };

const char* to_string(Criterion c);
Criterion criterion_from_string(const std::string& s);

/// Upper bound on I(t) implied by a criterion, as a closed-form curve.
struct BoundCurve {
    enum class Kind { Quadratic, Exponential } kind = Kind::Quadratic;
    // Quadratic: c0 + c1 t + c2 t^2.
    // Exponential: c0 e^t + c1 (e^t - e^{-t})/2 + c2.
    double c0 = 0.0, c1 = 0.0, c2 = 0.0;

    double operator()(double t) const;
};

struct Condition {
    std::string name;
    bool satisfied = false;
    double lhs = 0.0;
    double rhs = 0.0;
    std::string relation;  // e.g. "<", ">=", "in"
};

struct BlowupCertificate {
    Criterion criterion = Criterion::Attractive;
    std::map<std::string, double> inputs;
    std::map<std::string, double> constants;
    std::vector<Condition> conditions;
    bool hypotheses_satisfied = false;
    /// Time by which a smooth solution must have ceased to exist.
    std::optional<double> predicted_bound_time;
    BoundCurve bound_curve;
    std::vector<std::string> notes;
};

/// Negative-energy criterion for attractive forces (ck > 0, gamma > 1).
BlowupCertificate check_attractive(const EnergyReport& r0, const SimParams& p);

/// Decay-of-J criterion for repulsive forces (ck < 0, 1 < gamma <= 1 + 2/d).
BlowupCertificate check_repulsive(const EnergyReport& r0, const SimParams& p);

/// Isothermal criterion (gamma = 1), stated for cp = 1. The entropy-splitting
/// parameter is 2 for attractive forces and for alpha < 0; for repulsive forces
/// with alpha >= 0 it is max(eps, 2, alpha).
BlowupCertificate check_isothermal(const EnergyReport& r0, const SimParams& p, double eps = 2.0);

BlowupCertificate check_criterion(Criterion c, const EnergyReport& r0, const SimParams& p);

struct JDecayResult {
    bool holds = true;
    double worst_ratio = 0.0;  // max over the series of J(t) / bound(t)
    double worst_time = 0.0;
};

/// Checks J(t) <= J(0) (t+1)^{2 - d(g-1)} along a series with relative slack.
JDecayResult j_decay_check(const std::vector<EnergyReport>& series, const SimParams& p, double slack = 0.05);

/// W^2 <= 4 E_u I, up to a relative tolerance.
bool cauchy_schwarz_check(const EnergyReport& r, double rel_tol = 1e-9);

}  // namespace erz
