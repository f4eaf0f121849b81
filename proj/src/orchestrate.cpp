#include "erz/orchestrate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "erz/dynamics.hpp"
#include "erz/io.hpp"
#include "erz/linear.hpp"
#include "erz/log.hpp"
#include "erz/spectral.hpp"

namespace erz::io {

namespace fs = std::filesystem;

namespace {

fs::path out_path(const Json& cfg, const std::string& name) { return fs::path(cfg.at("output_dir").get<std::string>()) / name; }

std::string numbered(const std::string& stem, long step) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_%06ld.erzf", stem.c_str(), step);
    return buf;
}

long step_count(double t_end, double dt) { return t_end > 0.0 ? static_cast<long>(std::ceil(t_end / dt - 1e-9)) : 0; }

int run_dispersion(const Json& cfg) {
    const linear::LinearParams p = linear_params(cfg);
    p.validate();
    CsvWriter csv(out_path(cfg, cfg.at("output").at("csv").get<std::string>()),
                  {"k", "lambda_sq", "omega_or_rate", "class"});
    const auto rows = linear::dispersion_table(p, cfg.at("kmax").get<double>(), cfg.at("dk").get<double>());
    for (const auto& r : rows)
        csv.row_text({format_number(r.k_norm), format_number(r.lambda_sq), format_number(r.omega_or_rate), r.kind});
    csv.close();
    log::info("dispersion: " + std::to_string(rows.size()) + " modes, " + to_string(linear::classify(p)));
    return kExitOk;
}

Json run_summary(const RunResult& r) {
    Json j;
    j["termination"] = to_string(r.termination);
    if (r.guard) j["guard"] = to_string(*r.guard);
    j["t_final"] = r.final_state.t;
    j["steps"] = r.steps;
    return j;
}

struct FlowRun {
    RunResult result;
    FlowState initial;
    SimParams params;
    DiagnosticsFrame frame;
};

// Shared by simulate and blowup: runs the flow and writes series, snapshots and the final state.
FlowRun run_flow(const Json& cfg) {
    const Json& out = cfg.at("output");
    const FlowState initial = initial_state(cfg);
    const SimParams params = sim_params(cfg);
    const DiagnosticsFrame frame = diagnostics_frame(cfg);
    SeriesWriter series(out_path(cfg, out.at("series_csv").get<std::string>()), initial.dim());
    const fs::path snap_dir = out_path(cfg, out.at("snapshot_dir").get<std::string>());
    RunOptions opts;
    opts.frame = frame;
    opts.report_stride = out.at("report_stride").get<int>();
    opts.snapshot_stride = out.at("snapshot_stride").get<int>();
    opts.on_report = [&](const EnergyReport& r) { series.add(r); };
    const double gamma = params.gamma;
    opts.on_snapshot = [&](const FlowState& s, long step) {
        const fs::path path = snap_dir / numbered("snap", step);
        ensure_parent(path);
        write_snapshot(state_snapshot(s, gamma), path);
    };
    FlowRun fr{run(initial, params, opts), initial, params, frame};
    series.close();
    const fs::path final_path = out_path(cfg, out.at("final_snapshot").get<std::string>());
    ensure_parent(final_path);
    write_snapshot(state_snapshot(fr.result.final_state, gamma), final_path);
    if (fr.result.termination == Termination::Completed)
        log::info("run completed at t = " + format_number(fr.result.final_state.t) + " after " +
                  std::to_string(fr.result.steps) + " steps");
    else
        log::warn("run stopped: " + fr.result.message);
    return fr;
}

BlowupCertificate certificate_for(const Json& cfg, const FlowState& initial, const SimParams& p,
                                  const DiagnosticsFrame& frame) {
    const Criterion c = criterion_from_string(cfg.at("criterion").get<std::string>());
    const EnergyReport r0 = energy_report(initial, p, frame);
    if (c == Criterion::Isothermal) {
        // unset means eps = max{2, alpha}
        const double eps = cfg.contains("isothermal_eps") ? cfg.at("isothermal_eps").get<double>()
                                                          : std::max(2.0, p.alpha);
        return check_isothermal(r0, p, eps);
    }
    return check_criterion(c, r0, p);
}

int run_simulate(const Json& cfg) {
    FlowRun fr = run_flow(cfg);
    const Json& out = cfg.at("output");
    Json summary = run_summary(fr.result);
    summary["message"] = fr.result.message;
    summary["cfl_warnings"] = fr.result.cfl_warnings;
    summary["grad_u_limit"] = fr.result.grad_u_limit;
    write_json(summary, out_path(cfg, out.at("summary_json").get<std::string>()));
    if (fr.result.termination == Termination::Completed) return kExitOk;
    if (cfg.contains("criterion")) {
        Json cert = certificate_json(certificate_for(cfg, fr.initial, fr.params, fr.frame));
        cert["observed"] = run_summary(fr.result);
        write_json(cert, out_path(cfg, out.at("certificate_json").get<std::string>()));
    }
    return kExitGuard;
}

int run_blowup(const Json& cfg) {
    const Json& out = cfg.at("output");
    const FlowState initial = initial_state(cfg);
    const SimParams p = sim_params(cfg);
    p.validate(initial.dim());
    const BlowupCertificate cert = certificate_for(cfg, initial, p, diagnostics_frame(cfg));
    Json doc = certificate_json(cert);

    double t_max = std::max(p.t_end, 1.0);
    if (cfg.contains("bound_t_max"))
        t_max = cfg["bound_t_max"].get<double>();
    else if (cert.predicted_bound_time)
        t_max = 1.25 * *cert.predicted_bound_time;
    const int samples = cfg.at("bound_samples").get<int>();
    CsvWriter curve(out_path(cfg, out.at("bound_csv").get<std::string>()), {"t", "I_bound"});
    for (int i = 0; i < samples; ++i) {
        const double t = t_max * i / (samples - 1);
        curve.row({t, cert.bound_curve(t)});
    }
    curve.close();

    int code = kExitOk;
    if (cfg.at("run").get<bool>()) {
        const FlowRun fr = run_flow(cfg);
        doc["observed"] = run_summary(fr.result);
        if (fr.result.termination != Termination::Completed) code = kExitGuard;
    }
    const auto problems = schema_violations(doc, certificate_schema());
    if (!problems.empty()) throw Error("certificate does not match its schema: " + problems.front());
    write_json(doc, out_path(cfg, out.at("certificate_json").get<std::string>()));
    log::info(std::string("blowup: hypotheses ") + (cert.hypotheses_satisfied ? "satisfied" : "not satisfied"));
    return code;
}

int run_convergence(const Json& cfg) {
    const Json& out = cfg.at("output");
    const SimParams base = sim_params(cfg);
    const Grid grid(cfg.at("d").get<int>(), cfg.at("n").get<int>(), cfg.at("L").get<double>());
    const InitialData data = initial_data(cfg.at("init"), grid);
    const bool mollify_data = cfg.at("mollify_data").get<bool>();

    const auto final_density = [&](double eps) {
        SimParams p = base;
        p.eps = eps;
        const double m = mollify_data ? eps : 0.0;
        std::vector<Field> u;
        for (const auto& c : data.u) u.push_back(mollify_initial(c, m));
        const FlowState s0 = convert(FlowState(Formulation::Primitive, mollify_initial(data.rho, m), u),
                                     p.formulation, p.gamma);
        RunResult r = run(s0, p);
        if (r.termination != Termination::Completed)
            throw GuardTripped(r.guard.value_or(GuardKind::MaxGradU), 0.0, 0.0, r.final_state);
        return density(r.final_state, p.gamma);
    };

    const Field reference = final_density(0.0);
    CsvWriter csv(out_path(cfg, out.at("csv").get<std::string>()), {"eps", "l2_diff", "ratio"});
    double prev = std::nan("");
    for (const auto& e : cfg.at("eps_values")) {
        const double eps = e.get<double>();
        const double diff = l2_norm(final_density(eps) - reference);
        csv.row({eps, diff, prev / diff});
        prev = diff;
    }
    csv.close();

    CsvWriter mcsv(out_path(cfg, out.at("mollify_csv").get<std::string>()), {"eps", "h1_distance", "ratio"});
    prev = std::nan("");
    for (const auto& e : cfg.at("mollify_values")) {
        const double eps = e.get<double>();
        const double dist = sobolev_norm(mollify_initial(data.rho, eps) - data.rho, 1.0);
        mcsv.row({eps, dist, prev / dist});
        prev = dist;
    }
    mcsv.close();
    return kExitOk;
}

std::vector<std::string> particle_header(int dim) {
    std::vector<std::string> h{"t", "I", "W", "E_u", "E_K", "H"};
    for (int a = 1; a <= dim; ++a) h.push_back("mom_" + std::to_string(a));
    for (int a = 1; a <= dim; ++a) h.push_back("mean_" + std::to_string(a));
    return h;
}

int run_particles(const Json& cfg) {
    const Json& out = cfg.at("output");
    const int d = cfg.at("d").get<int>();
    const Grid grid(d, cfg.at("n").get<int>(), cfg.at("L").get<double>());
    const InitialData data = initial_data(cfg.at("init"), grid);
    ParticleEnsemble e = sample_monokinetic(data.rho, data.u, sample_spec(cfg));
    log::info("particles: N = " + std::to_string(e.size()) + ", softening " + format_number(e.softening));

    CsvWriter csv(out_path(cfg, out.at("series_csv").get<std::string>()), particle_header(d));
    const fs::path snap_dir = out_path(cfg, out.at("snapshot_dir").get<std::string>());
    const int report_stride = out.at("report_stride").get<int>();
    const int snapshot_stride = out.at("snapshot_stride").get<int>();
    double t = 0.0;
    const auto report = [&] {
        const ParticleFunctionals f = particle_functionals(e);
        std::vector<double> row{t, f.inertia, f.virial, f.kinetic, f.interaction, f.hamiltonian};
        for (int a = 0; a < d; ++a) row.push_back(f.momentum[a]);
        for (int a = 0; a < d; ++a) row.push_back(f.mean[a]);
        csv.row(row);
    };
    const auto snapshot = [&](long step) {
        const fs::path path = snap_dir / numbered("particles", step);
        ensure_parent(path);
        write_snapshot(particle_snapshot(e), path);
    };
    report();
    if (snapshot_stride > 0) snapshot(0);

    const double dt = cfg.at("dt").get<double>();
    const double t_end = cfg.at("t_end").get<double>();
    const long total = step_count(t_end, dt);
    for (long n = 1; n <= total; ++n) {
        const double h = n < total ? dt : t_end - (total - 1) * dt;
        e = verlet_step(std::move(e), h);
        t = n < total ? n * dt : t_end;
        if (n % report_stride == 0 || n == total) report();
        if (snapshot_stride > 0 && (n % snapshot_stride == 0 || n == total)) snapshot(n);
    }
    csv.close();
    return kExitOk;
}

int run_inequalities(const Json& cfg) {
    const Json& out = cfg.at("output");
    const TestFunctionSpec spec = test_function_spec(cfg);
    const SweepParams params = sweep_params(cfg);
    const Inequality which = inequality_from_string(cfg.at("which").get<std::string>());
    const SweepSummary s = sweep(spec, which, cfg.at("trials").get<std::size_t>(), params,
                                 cfg.at("first_trial").get<std::uint64_t>());

    CsvWriter csv(out_path(cfg, out.at("trials_csv").get<std::string>()), {"trial", "lhs", "rhs", "ratio"});
    for (const auto& r : s.samples)
        csv.row_text({std::to_string(r.trial), format_number(r.lhs), format_number(r.rhs),
                      r.ratio ? format_number(*r.ratio) : "nan"});
    csv.close();

    Json j;
    j["which"] = to_string(which);
    j["d"] = spec.dim;
    j["n"] = spec.points;
    j["L"] = spec.box_length;
    j["seed"] = spec.seed;
    j["first_trial"] = cfg.at("first_trial");
    switch (which) {
        case Inequality::Gns: {
            j["m"] = params.m;
            j["tuple"] = Json::array();
            for (const auto& l : params.tuple.empty() ? default_gns_tuple(params.m) : params.tuple) {
                Json orders = Json::array();
                for (int a = 0; a < spec.dim; ++a) orders.push_back(l[a]);
                j["tuple"].push_back(orders);
            }
            break;
        }
        case Inequality::Commutator: j["s"] = params.s; j["eps"] = params.eps; break;
        case Inequality::Power: j["beta"] = params.beta; j["k"] = params.k; break;
    }
    j["trials"] = s.trials;
    j["skipped"] = s.skipped;
    j["max_ratio"] = s.max_ratio;
    j["median_ratio"] = s.median_ratio;
    j["argmax_trial"] = s.argmax_trial;
    j["early_max"] = s.early_max;
    j["bounded"] = s.bounded;
    j["finding"] = s.finding;
    write_json(j, out_path(cfg, out.at("summary_json").get<std::string>()));
    log::info(std::string(to_string(which)) + ": max ratio " + format_number(s.max_ratio));
    return kExitOk;
}

}  // namespace

int run_command(Command c, const Json& cfg) {
    log::set_level(log::level_from_string(cfg.at("log_level").get<std::string>()));
    switch (c) {
        case Command::Dispersion: return run_dispersion(cfg);
        case Command::Simulate: return run_simulate(cfg);
        case Command::Blowup: return run_blowup(cfg);
        case Command::Particles: return run_particles(cfg);
        case Command::Inequalities: return run_inequalities(cfg);
        case Command::Convergence: return run_convergence(cfg);
    }
    return kExitUsage;
}

int orchestrate(Command c, const Json& cfg) {
    try {
        return run_command(c, cfg);
    } catch (const SchemaError& e) {
        log::error(e.what());
        return kExitSchema;
    } catch (const InvalidArgument& e) {
        log::error(e.what());
        return kExitSchema;
    } catch (const WrongRegime& e) {
        log::error(e.what());
        return kExitSchema;
    } catch (const IoError& e) {
        log::error(e.what());
        return kExitIo;
    } catch (const FormatError& e) {
        log::error(e.what());
        return kExitIo;
    } catch (const GuardTripped& e) {
        log::error(e.what());
        return kExitGuard;
    } catch (const ParticleCollision& e) {
        log::error(e.what());
        return kExitGuard;
    } catch (const std::exception& e) {
        log::error(e.what());
        return kExitUsage;
    }
}

}  // namespace erz::io
