// erz command-line driver: builds a configuration from an optional JSON file
// plus flag overrides, validates it and hands it to the orchestrator.

#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "erz/config.hpp"
#include "erz/log.hpp"
#include "erz/orchestrate.hpp"

namespace {

using erz::io::Command;
using erz::io::Json;

enum class Kind { Number, Integer, String, Bool, Raw };

struct FlagSpec {
    const char* flag;
    const char* key;
    Kind kind;
    const char* help;
};

const std::vector<FlagSpec> kFlowFlags = {
    {"--formulation", "formulation", Kind::String, "primitive | isentropic_q | isothermal_q"},
    {"--d", "d", Kind::Integer, "dimension"},
    {"--n", "n", Kind::Integer, "grid points per axis"},
    {"--L", "L", Kind::Number, "box length"},
    {"--cp", "cp", Kind::Number, "pressure coefficient"},
    {"--ck", "ck", Kind::Number, "interaction coefficient (> 0 attractive)"},
    {"--alpha", "alpha", Kind::Number, "Riesz exponent"},
    {"--gamma", "gamma", Kind::Number, "adiabatic exponent"},
    {"--eps", "eps", Kind::Number, "viscosity"},
    {"--dt", "dt", Kind::Number, "time step"},
    {"--t-end", "t_end", Kind::Number, "final time"},
    {"--init-kind", "init.kind", Kind::String, "gaussian_bump | single_mode | file"},
    {"--init-file", "init.path", Kind::String, "ERZF file for init kind 'file'"},
    {"--mollify", "init.mollify", Kind::Number, "mollification parameter of the initial data"},
    {"--background", "init.background", Kind::Number, "background density"},
    {"--amplitude", "init.amplitude", Kind::Number, "initial perturbation amplitude"},
    {"--width", "init.width", Kind::Number, "bump width"},
    {"--report-stride", "output.report_stride", Kind::Integer, "steps between series rows"},
    {"--snapshot-stride", "output.snapshot_stride", Kind::Integer, "steps between snapshots (0 = none)"},
};

std::map<Command, std::vector<FlagSpec>> command_flags() {
    std::map<Command, std::vector<FlagSpec>> m;
    m[Command::Dispersion] = {
        {"--d", "d", Kind::Integer, "dimension"},
        {"--cp", "cp", Kind::Number, "linear pressure coefficient"},
        {"--ck", "ck", Kind::Number, "interaction coefficient"},
        {"--alpha", "alpha", Kind::Number, "Riesz exponent"},
        {"--kmax", "kmax", Kind::Number, "largest |k|"},
        {"--dk", "dk", Kind::Number, "|k| spacing"},
        {"--csv", "output.csv", Kind::String, "output CSV"},
    };
    m[Command::Simulate] = kFlowFlags;
    m[Command::Simulate].push_back({"--criterion", "criterion", Kind::String, "certificate written on a guard trip"});
    m[Command::Blowup] = kFlowFlags;
    m[Command::Blowup].push_back({"--criterion", "criterion", Kind::String, "attractive | repulsive | isothermal"});
    m[Command::Blowup].push_back({"--isothermal-eps", "isothermal_eps", Kind::Number, "entropy-splitting parameter"});
    m[Command::Blowup].push_back({"--run", "run", Kind::Bool, "also run the flow and record the observed outcome"});
    m[Command::Convergence] = kFlowFlags;
    m[Command::Convergence].push_back({"--eps-values", "eps_values", Kind::Raw, "JSON array of viscosities"});
    m[Command::Particles] = {
        {"--N", "N", Kind::Integer, "particle count"},
        {"--d", "d", Kind::Integer, "dimension"},
        {"--alpha", "alpha", Kind::Number, "Riesz exponent"},
        {"--ck", "ck", Kind::Number, "interaction coefficient"},
        {"--delta", "delta", Kind::Number, "softening (negative = automatic)"},
        {"--dt", "dt", Kind::Number, "time step"},
        {"--t-end", "t_end", Kind::Number, "final time"},
        {"--sampler", "sampler", Kind::String, "iid | quadrature"},
        {"--n", "n", Kind::Integer, "sampling grid points per axis"},
        {"--L", "L", Kind::Number, "sampling box length"},
        {"--init-kind", "init.kind", Kind::String, "gaussian_bump | single_mode | file"},
        {"--init-file", "init.path", Kind::String, "ERZF file for init kind 'file'"},
        {"--background", "init.background", Kind::Number, "background density subtracted before sampling"},
        {"--amplitude", "init.amplitude", Kind::Number, "bump amplitude"},
        {"--width", "init.width", Kind::Number, "bump width"},
        {"--snapshot-stride", "output.snapshot_stride", Kind::Integer, "steps between snapshots (0 = none)"},
    };
    m[Command::Inequalities] = {
        {"--which", "which", Kind::String, "gns | commutator | power"},
        {"--d", "d", Kind::Integer, "dimension"},
        {"--n", "n", Kind::Integer, "grid points per axis"},
        {"--m", "m", Kind::Integer, "GNS derivative order"},
        {"--tuple", "tuple", Kind::Raw, "GNS multi-indices as JSON, e.g. [[1],[2]]"},
        {"--s", "s", Kind::Number, "commutator order"},
        {"--eps", "eps", Kind::Number, "commutator regularity margin"},
        {"--beta", "beta", Kind::Number, "power exponent"},
        {"--k", "k", Kind::Integer, "power-Sobolev order"},
        {"--cutoff", "cutoff", Kind::Integer, "largest test-function mode"},
        {"--trials", "trials", Kind::Integer, "trial count"},
        {"--first-trial", "first_trial", Kind::Integer, "index of the first trial"},
    };
    return m;
}

// Converts a flag value; unparsable numbers are kept as strings so the schema reports them.
Json flag_value(const std::string& text, Kind kind) {
    try {
        switch (kind) {
            case Kind::Number: {
                std::size_t used = 0;
                const double v = std::stod(text, &used);
                if (used == text.size()) return v;
                break;
            }
            case Kind::Integer: {
                std::size_t used = 0;
                const long long v = std::stoll(text, &used);
                if (used == text.size()) return v;
                break;
            }
            case Kind::Raw: return Json::parse(text);
            case Kind::Bool: return text != "false";
            case Kind::String: break;
        }
    } catch (const std::exception&) {
    }
    return text;
}

struct Bound {
    FlagSpec spec;
    std::string value;
    bool set = false;
    CLI::Option* opt = nullptr;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical laboratory for the Euler-Riesz system"};
    app.require_subcommand(1);
    app.fallthrough();

    std::optional<std::uint64_t> seed;
    std::optional<std::string> output_dir, log_level;
    app.add_option("--seed", seed, "global seed");
    app.add_option("--output-dir", output_dir, "directory for all outputs");
    app.add_option("--log-level", log_level, "debug | info | warn | error | off");

    struct Sub {
        Command command;
        CLI::App* app;
        std::string config;
        std::vector<std::string> sets;
        std::vector<Bound> flags;
    };
    const auto flags = command_flags();
    std::vector<Sub> subs;
    subs.reserve(flags.size());
    const std::map<Command, const char*> about = {
        {Command::Dispersion, "linear dispersion table"},
        {Command::Simulate, "nonlinear pseudo-spectral run"},
        {Command::Blowup, "blow-up certificate of the initial data"},
        {Command::Particles, "particle system run"},
        {Command::Inequalities, "randomized inequality sweep"},
        {Command::Convergence, "vanishing-viscosity sweep"},
    };
    for (const auto& [command, specs] : flags) {
        subs.push_back({command, app.add_subcommand(erz::io::to_string(command), about.at(command)), "", {}, {}});
        Sub& sub = subs.back();
        sub.app->add_option("--config", sub.config, "JSON configuration file");
        sub.app->add_option("--set", sub.sets, "override a configuration key: key.path=JSON");
        sub.flags.reserve(specs.size());
        for (const auto& spec : specs) {
            sub.flags.push_back({spec, "", false, nullptr});
            Bound& b = sub.flags.back();
            if (spec.kind == Kind::Bool)
                b.opt = sub.app->add_flag(spec.flag, b.set, spec.help);
            else
                b.opt = sub.app->add_option(spec.flag, b.value, spec.help);
        }
    }
    std::string schema_name;
    CLI::App* schema_cmd = app.add_subcommand("schema", "print the effective JSON schema of a command or 'certificate'");
    schema_cmd->add_option("name", schema_name, "command name or 'certificate'")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? erz::io::kExitOk : erz::io::kExitUsage;
    }

    try {
        if (schema_cmd->parsed()) {
            const Json s = schema_name == "certificate" ? erz::io::certificate_schema()
                                                         : erz::io::command_schema(erz::io::command_from_string(schema_name));
            std::cout << s.dump(2) << '\n';
            return erz::io::kExitOk;
        }
    } catch (const erz::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return erz::io::kExitUsage;
    }

    for (auto& sub : subs) {
        if (!sub.app->parsed()) continue;
        try {
            Json doc = sub.config.empty() ? Json::object() : erz::io::load_json(sub.config);
            if (!doc.is_object()) throw erz::SchemaError({"configuration must be a JSON object"});
            for (const auto& b : sub.flags) {
                if (b.opt->count() == 0) continue;
                erz::io::set_path(doc, b.spec.key, b.spec.kind == Kind::Bool ? Json(b.set) : flag_value(b.value, b.spec.kind));
            }
            for (const auto& s : sub.sets) {
                const auto eq = s.find('=');
                if (eq == std::string::npos) {
                    std::cerr << "error: --set expects key=value, got '" << s << "'\n";
                    return erz::io::kExitUsage;
                }
                erz::io::set_path(doc, s.substr(0, eq), flag_value(s.substr(eq + 1), Kind::Raw));
            }
            if (seed) doc["seed"] = *seed;
            if (output_dir) doc["output_dir"] = *output_dir;
            if (log_level) doc["log_level"] = *log_level;
            const Json cfg = erz::io::parse_config(std::move(doc), sub.command);
            return erz::io::orchestrate(sub.command, cfg);
        } catch (const erz::SchemaError& e) {
            std::cerr << "error: " << e.what() << '\n';
            return erz::io::kExitSchema;
        } catch (const erz::IoError& e) {
            std::cerr << "error: " << e.what() << '\n';
            return erz::io::kExitIo;
        } catch (const erz::Error& e) {
            std::cerr << "error: " << e.what() << '\n';
            return erz::io::kExitUsage;
        }
    }
    return erz::io::kExitUsage;
}
