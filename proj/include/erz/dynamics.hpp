#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "erz/diagnostics.hpp"
#include "erz/flow.hpp"

namespace erz {

enum class GuardKind { MaxGradU, DensityFloor, SpectralTail };

const char* to_string(GuardKind k);

/// Raised by step() when the new state crosses a blow-up guard. Carries the
/// offending state.
class GuardTripped : public Error {
  public:
    GuardTripped(GuardKind kind, double value, double threshold, FlowState state);

    GuardKind kind;
    double value;
    double threshold;
    FlowState state;
};

/// Instantaneous tendency of the chosen formulation.
FlowState rhs(const FlowState& s, const SimParams& p);

/// Largest dt allowed by the advisory bound 0.5 h / (|u|_inf + c_wave), with
/// the safety factor taken from p.cfl_safety.
double cfl_limit(const FlowState& s, const SimParams& p);

/// One integrating-factor RK4 step of size p.dt (or `dt` when given).
/// Throws GuardTripped or NonFinite.
FlowState step(const FlowState& s, const SimParams& p, std::optional<double> dt = std::nullopt);

/// Evaluates the guards on a state without stepping.
void check_guards(const FlowState& s, const SimParams& p);

/// Pooled spectral tail ratio over the scalar and all velocity components.
double state_tail_ratio(const FlowState& s, bool dealiased);

/// Gaussian mollifier: coefficients times exp(-eps^2 |k|^2 / 2).
Field mollify_initial(const Field& f, double eps);

enum class Termination { Completed, GuardTripped, NonFinite };

const char* to_string(Termination t);

struct RunOptions {
    DiagnosticsFrame frame;
    int report_stride = 1;
    /// 0 disables periodic snapshots.
    int snapshot_stride = 0;
    std::function<void(const EnergyReport&)> on_report;
    std::function<void(const FlowState&, long step)> on_snapshot;
};

struct RunResult {
    Termination termination = Termination::Completed;
    std::optional<GuardKind> guard;
    std::string message;
    FlowState final_state;
    std::vector<EnergyReport> series;
    long steps = 0;
    long cfl_warnings = 0;
    /// Resolved absolute gradient guard.
    double grad_u_limit = 0.0;
};

/// Advances to p.t_end or until a guard trips. The final state is the last
/// accepted one, or the offending state on a guard trip.
RunResult run(const FlowState& initial, SimParams p, const RunOptions& opts = {});

}  // namespace erz
