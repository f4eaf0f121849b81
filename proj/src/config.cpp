#include "erz/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "erz/dynamics.hpp"
#include "erz/io.hpp"
#include "erz/schemas_embedded.hpp"
#include "erz/snapshot.hpp"
#include "erz/spectral.hpp"

namespace erz::io {

const char* to_string(Command c) {
    switch (c) {
        case Command::Dispersion: return "dispersion";
        case Command::Simulate: return "simulate";
        case Command::Blowup: return "blowup";
        case Command::Particles: return "particles";
        case Command::Inequalities: return "inequalities";
        case Command::Convergence: return "convergence";
    }
    return "?";
}

Command command_from_string(const std::string& s) {
    for (Command c : {Command::Dispersion, Command::Simulate, Command::Blowup, Command::Particles,
                      Command::Inequalities, Command::Convergence})
        if (s == to_string(c)) return c;
    throw InvalidArgument("unknown command '" + s + "'");
}

const Json& config_schema_document() {
    static const Json doc = Json::parse(kConfigSchemaText);
    return doc;
}

const Json& certificate_schema() {
    static const Json doc = Json::parse(kCertificateSchemaText);
    return doc;
}

namespace {

bool uses_flow(Command c) {
    return c == Command::Simulate || c == Command::Blowup || c == Command::Convergence;
}

std::string show(const Json& v) { return v.dump(); }

std::string display_path(const std::string& path) { return path.empty() ? "(root)" : path; }

std::string child_path(const std::string& parent, const std::string& key) {
    return parent.empty() ? key : parent + "." + key;
}

const char* type_name(const Json& v) {
    if (v.is_null()) return "null";
    if (v.is_boolean()) return "boolean";
    if (v.is_number_integer() || v.is_number_unsigned()) return "integer";
    if (v.is_number()) return "number";
    if (v.is_string()) return "string";
    if (v.is_array()) return "array";
    return "object";
}

bool integral(const Json& v) {
    if (v.is_number_integer() || v.is_number_unsigned()) return true;
    if (!v.is_number_float()) return false;
    const double x = v.get<double>();
    return std::isfinite(x) && std::floor(x) == x;
}

bool has_type(const Json& v, const std::string& t) {
    if (t == "null") return v.is_null();
    if (t == "boolean") return v.is_boolean();
    if (t == "integer") return integral(v);
    if (t == "number") return v.is_number();
    if (t == "string") return v.is_string();
    if (t == "array") return v.is_array();
    if (t == "object") return v.is_object();
    return false;
}

class Validator {
  public:
    Validator(const Json& root, std::vector<std::string>& out) : root_(root), out_(out) {}

    const Json& resolve(const Json& s) const {
        if (s.is_object() && s.contains("$ref")) {
            const std::string ref = s["$ref"].get<std::string>();
            if (ref.rfind("#", 0) != 0) throw InvalidArgument("only local schema references are supported: " + ref);
            return resolve(root_.at(Json::json_pointer(ref.substr(1))));
        }
        return s;
    }

    void check(const Json& inst, const Json& raw, const std::string& path) {
        const Json& s = resolve(raw);
        if (s.is_boolean()) {
            if (!s.get<bool>()) out_.push_back(display_path(path) + ": not allowed");
            return;
        }
        if (s.contains("type")) {
            std::vector<std::string> types;
            if (s["type"].is_array())
                for (const auto& t : s["type"]) types.push_back(t.get<std::string>());
            else
                types.push_back(s["type"].get<std::string>());
            bool ok = false;
            for (const auto& t : types) ok = ok || has_type(inst, t);
            if (!ok) {
                std::string want;
                for (std::size_t i = 0; i < types.size(); ++i) want += (i ? " or " : "") + types[i];
                out_.push_back(display_path(path) + ": expected " + want + ", got " + type_name(inst));
                return;
            }
        }
        if (s.contains("enum")) {
            bool ok = false;
            for (const auto& e : s["enum"]) ok = ok || e == inst;
            if (!ok) {
                std::string list;
                for (const auto& e : s["enum"]) list += (list.empty() ? "" : ", ") + show(e);
                out_.push_back(display_path(path) + ": " + show(inst) + " is not one of [" + list + "]");
                return;
            }
        }
        if (s.contains("const") && s["const"] != inst)
            out_.push_back(display_path(path) + ": must equal " + show(s["const"]));
        if (inst.is_number()) check_number(inst.get<double>(), s, path);
        if (inst.is_array()) check_array(inst, s, path);
        if (inst.is_object()) check_object(inst, s, path);
    }

  private:
    void check_number(double v, const Json& s, const std::string& path) {
        const std::string name = display_path(path);
        const auto bound = [&](const char* key, const char* rel, bool ok) {
            if (!ok) out_.push_back(name + " = " + show(Json(v)) + " violates " + name + " " + rel + " " + show(s[key]));
        };
        if (s.contains("minimum")) bound("minimum", "≥", v >= s["minimum"].get<double>());
        if (s.contains("exclusiveMinimum")) bound("exclusiveMinimum", ">", v > s["exclusiveMinimum"].get<double>());
        if (s.contains("maximum")) bound("maximum", "≤", v <= s["maximum"].get<double>());
        if (s.contains("exclusiveMaximum")) bound("exclusiveMaximum", "<", v < s["exclusiveMaximum"].get<double>());
    }

    void check_array(const Json& inst, const Json& s, const std::string& path) {
        if (s.contains("minItems") && inst.size() < s["minItems"].get<std::size_t>())
            out_.push_back(display_path(path) + ": needs at least " + show(s["minItems"]) + " items");
        if (s.contains("maxItems") && inst.size() > s["maxItems"].get<std::size_t>())
            out_.push_back(display_path(path) + ": allows at most " + show(s["maxItems"]) + " items");
        if (s.contains("items"))
            for (std::size_t i = 0; i < inst.size(); ++i)
                check(inst[i], s["items"], path + "[" + std::to_string(i) + "]");
    }

    void check_object(const Json& inst, const Json& s, const std::string& path) {
        if (s.contains("required"))
            for (const auto& k : s["required"])
                if (!inst.contains(k.get<std::string>()))
                    out_.push_back(display_path(path) + ": missing required key " + show(k));
        const Json empty = Json::object();
        const Json& props = s.contains("properties") ? s["properties"] : empty;
        for (const auto& [key, value] : inst.items()) {
            if (props.contains(key)) {
                check(value, props[key], child_path(path, key));
            } else if (s.contains("additionalProperties")) {
                const Json& extra = s["additionalProperties"];
                if (extra.is_boolean() && !extra.get<bool>())
                    out_.push_back(display_path(path) + ": unknown key \"" + key + "\"");
                else if (extra.is_object())
                    check(value, extra, child_path(path, key));
            }
        }
    }

    const Json& root_;
    std::vector<std::string>& out_;
};

Json fill_defaults(Json inst, const Json& raw, const Validator& v) {
    const Json& s = v.resolve(raw);
    if (!inst.is_object() || !s.is_object() || !s.contains("properties")) return inst;
    for (const auto& [key, sub_raw] : s["properties"].items()) {
        const Json& sub = v.resolve(sub_raw);
        if (!inst.contains(key)) {
            if (sub.contains("default"))
                inst[key] = sub["default"];
            else if (sub.contains("type") && sub["type"] == "object" && sub.contains("properties"))
                inst[key] = Json::object();
            else
                continue;
        }
        inst[key] = fill_defaults(inst[key], sub, v);
    }
    return inst;
}

void merge_properties(Json& into, const Json& set) {
    if (!set.contains("properties")) return;
    for (const auto& [k, v] : set["properties"].items()) into[k] = v;
}

// Number at key when present with a numeric value.
std::optional<double> num(const Json& obj, const char* key) {
    if (!obj.is_object() || !obj.contains(key) || !obj[key].is_number()) return std::nullopt;
    return obj[key].get<double>();
}

std::optional<int> whole(const Json& obj, const char* key) {
    if (!obj.is_object() || !obj.contains(key) || !integral(obj[key])) return std::nullopt;
    return static_cast<int>(obj[key].get<double>());
}

std::string fmt(double v) { return format_number(v); }

// Typed lookups that tolerate wrongly typed values, which are reported by the schema pass.
std::string text(const Json& obj, const char* key, const std::string& fallback) {
    if (!obj.is_object() || !obj.contains(key) || !obj[key].is_string()) return fallback;
    return obj[key].get<std::string>();
}

bool flag(const Json& obj, const char* key) {
    return obj.is_object() && obj.contains(key) && obj[key].is_boolean() && obj[key].get<bool>();
}

Json object_at(const Json& obj, const char* key) {
    if (!obj.is_object() || !obj.contains(key) || !obj[key].is_object()) return Json::object();
    return obj[key];
}

void check_alpha(const Json& cfg, std::vector<std::string>& out) {
    const auto d = whole(cfg, "d");
    const auto alpha = num(cfg, "alpha");
    if (!d || !alpha) return;
    const bool extended = flag(cfg, "extended_alpha");
    const double lo = *d - 2.0, hi = extended ? *d + 2.0 : *d;
    if (!(*alpha > lo && *alpha < hi))
        out.push_back("alpha = " + fmt(*alpha) + " must lie in the open interval " +
                      (extended ? "(d-2, d+2)" : "(d-2, d)") + " = (" + fmt(lo) + ", " + fmt(hi) + ")");
}

void check_init(const Json& init, int d, bool need_positive, std::vector<std::string>& out) {
    if (!init.is_object()) return;
    const std::string kind = text(init, "kind", "gaussian_bump");
    for (const char* key : {"center", "mode"})
        if (init.contains(key) && init[key].is_array() && static_cast<int>(init[key].size()) != d)
            out.push_back(std::string("init.") + key + " needs " + std::to_string(d) + " entries");
    if (kind == "file" && !init.contains("path")) out.push_back("init.path is required when init.kind is \"file\"");
    if (kind == "single_mode" && init.contains("mode") && init["mode"].is_array()) {
        bool zero = true;
        for (const auto& m : init["mode"]) zero = zero && m.is_number() && m.get<double>() == 0.0;
        if (zero) out.push_back("init.mode must be a nonzero wavevector");
    }
    const auto bg = num(init, "background");
    const auto amp = num(init, "amplitude");
    if (!need_positive || !bg || !amp || kind == "file") return;
    const double low = kind == "single_mode" ? *bg - std::abs(*amp) : *bg + std::min(0.0, *amp);
    if (!(low > 0.0))
        out.push_back("initial density must stay positive: its minimum " + fmt(low) + " is <= 0");
}

void check_flow(const Json& cfg, std::vector<std::string>& out) {
    check_alpha(cfg, out);
    if (const auto n = whole(cfg, "n"); n && *n % 2 != 0) out.push_back("n = " + std::to_string(*n) + " must be even");
    const std::string form = text(cfg, "formulation", "primitive");
    if (const auto g = num(cfg, "gamma")) {
        if (form == "isothermal_q" && *g != 1.0) out.push_back("formulation isothermal_q requires gamma = 1");
        if (form == "isentropic_q" && !(*g > 1.0)) out.push_back("formulation isentropic_q requires gamma > 1");
    }
    check_init(object_at(cfg, "init"), whole(cfg, "d").value_or(1), true, out);
    const Json frame = object_at(cfg, "frame");
    if (frame.contains("center") && frame["center"].is_array() &&
        static_cast<int>(frame["center"].size()) != whole(cfg, "d").value_or(1))
        out.push_back("frame.center needs one entry per dimension");
}

void check_inequalities(const Json& cfg, std::vector<std::string>& out) {
    const auto n = whole(cfg, "n");
    const auto d = whole(cfg, "d").value_or(1);
    if (n && *n % 2 != 0) out.push_back("n = " + std::to_string(*n) + " must be even");
    if (const auto c = whole(cfg, "cutoff"); n && c && 2 * *c >= *n)
        out.push_back("cutoff = " + std::to_string(*c) + " must be below n/2");
    if (text(cfg, "which", "gns") != "gns" || !cfg.contains("tuple") || !cfg["tuple"].is_array()) return;
    int order = 0;
    for (const auto& l : cfg["tuple"]) {
        if (!l.is_array()) return;
        if (static_cast<int>(l.size()) != d) out.push_back("each tuple entry needs " + std::to_string(d) + " orders");
        for (const auto& o : l)
            if (o.is_number()) order += static_cast<int>(o.get<double>());
    }
    if (const auto m = whole(cfg, "m"); m && order != *m)
        out.push_back("tuple orders sum to " + std::to_string(order) + " but m = " + std::to_string(*m));
}

std::vector<std::string> range_violations(Command c, const Json& cfg) {
    std::vector<std::string> out;
    switch (c) {
        case Command::Dispersion: check_alpha(cfg, out); break;
        case Command::Simulate:
        case Command::Blowup:
        case Command::Convergence: check_flow(cfg, out); break;
        case Command::Particles: {
            check_alpha(cfg, out);
            if (const auto n = whole(cfg, "n"); n && *n % 2 != 0)
                out.push_back("n = " + std::to_string(*n) + " must be even");
            const Json init = object_at(cfg, "init");
            check_init(init, whole(cfg, "d").value_or(1), false, out);
            if (text(init, "kind", "gaussian_bump") == "gaussian_bump")
                if (const auto a = num(init, "amplitude"); a && !(*a > 0.0))
                    out.push_back("particle sampling needs init.amplitude > 0 above the background");
            break;
        }
        case Command::Inequalities: check_inequalities(cfg, out); break;
    }
    return out;
}

std::array<double, kMaxDim> read_vec(const Json& arr) {
    std::array<double, kMaxDim> v{};
    for (std::size_t i = 0; i < arr.size() && i < kMaxDim; ++i) v[i] = arr[i].get<double>();
    return v;
}

}  // namespace

Json command_schema(Command c) {
    const Json& doc = config_schema_document();
    const Json& defs = doc["definitions"];
    Json props = Json::object();
    merge_properties(props, defs["global"]);
    if (uses_flow(c)) merge_properties(props, defs["flow"]);
    merge_properties(props, defs[to_string(c)]);
    Json s;
    s["$schema"] = doc["$schema"];
    s["title"] = std::string("erz ") + to_string(c) + " configuration";
    s["type"] = "object";
    s["additionalProperties"] = false;
    s["properties"] = props;
    s["definitions"] = defs;
    return s;
}

std::vector<std::string> schema_violations(const Json& instance, const Json& schema) {
    std::vector<std::string> out;
    Validator v(schema, out);
    v.check(instance, schema, "");
    return out;
}

Json apply_defaults(Json instance, const Json& schema) {
    std::vector<std::string> unused;
    Validator v(schema, unused);
    return fill_defaults(std::move(instance), schema, v);
}

Json load_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("cannot read " + path.string());
    try {
        return Json::parse(buf.str());
    } catch (const Json::parse_error& e) {
        throw SchemaError({path.string() + ": malformed JSON: " + e.what()});
    }
}

void set_path(Json& doc, const std::string& dotted, Json value) {
    if (!doc.is_object()) doc = Json::object();
    Json* cur = &doc;
    std::size_t start = 0;
    while (true) {
        const std::size_t dot = dotted.find('.', start);
        const std::string key = dotted.substr(start, dot - start);
        if (key.empty()) throw InvalidArgument("malformed key path '" + dotted + "'");
        if (dot == std::string::npos) {
            (*cur)[key] = std::move(value);
            return;
        }
        if (!cur->contains(key) || !(*cur)[key].is_object()) (*cur)[key] = Json::object();
        cur = &(*cur)[key];
        start = dot + 1;
    }
}

Json parse_config(Json doc, Command c) {
    if (!doc.is_object()) throw SchemaError({"configuration must be a JSON object"});
    const Json schema = command_schema(c);
    auto violations = schema_violations(doc, schema);
    Json cfg = apply_defaults(std::move(doc), schema);
    for (auto& v : range_violations(c, cfg)) violations.push_back(std::move(v));
    if (!violations.empty()) throw SchemaError(std::move(violations));
    return cfg;
}

Json parse_config(const std::filesystem::path& path, Command c) { return parse_config(load_json(path), c); }

SimParams sim_params(const Json& cfg) {
    SimParams p;
    p.formulation = formulation_from_string(cfg.at("formulation").get<std::string>());
    p.cp = cfg.at("cp").get<double>();
    p.ck = cfg.at("ck").get<double>();
    p.alpha = cfg.at("alpha").get<double>();
    p.gamma = cfg.at("gamma").get<double>();
    p.eps = cfg.at("eps").get<double>();
    p.dt = cfg.at("dt").get<double>();
    p.t_end = cfg.at("t_end").get<double>();
    p.dealias = cfg.at("dealias").get<bool>();
    p.cfl_safety = cfg.at("cfl_safety").get<double>();
    p.extended_alpha = cfg.at("extended_alpha").get<bool>();
    const Json& g = cfg.at("guards");
    p.guards.grad_u_factor = g.at("grad_u_factor").get<double>();
    p.guards.density_floor = g.at("density_floor").get<double>();
    p.guards.tail_ratio = g.at("tail_ratio").get<double>();
    return p;
}

DiagnosticsFrame diagnostics_frame(const Json& cfg) {
    DiagnosticsFrame f;
    const Json& frame = cfg.at("frame");
    const Json& init = cfg.at("init");
    if (frame.contains("background"))
        f.background = frame["background"].get<double>();
    else if (init.at("kind").get<std::string>() != "file")
        f.background = init.at("background").get<double>();
    if (frame.contains("center")) f.center = read_vec(frame["center"]);
    f.boundary_margin = frame.at("boundary_margin").get<double>();
    f.support_level = frame.at("support_level").get<double>();
    return f;
}

linear::LinearParams linear_params(const Json& cfg) {
    linear::LinearParams p;
    p.cp = cfg.at("cp").get<double>();
    p.ck = cfg.at("ck").get<double>();
    p.alpha = cfg.at("alpha").get<double>();
    p.dim = cfg.at("d").get<int>();
    return p;
}

TestFunctionSpec test_function_spec(const Json& cfg) {
    TestFunctionSpec s;
    s.dim = cfg.at("d").get<int>();
    s.points = cfg.at("n").get<int>();
    s.box_length = cfg.at("L").get<double>();
    s.floor = cfg.at("floor").get<double>();
    s.cutoff = cfg.at("cutoff").get<int>();
    s.amplitude_budget = cfg.at("amplitude_budget").get<double>();
    s.seed = cfg.at("seed").get<std::uint64_t>();
    return s;
}

SweepParams sweep_params(const Json& cfg) {
    SweepParams p;
    p.m = cfg.at("m").get<int>();
    if (cfg.contains("tuple"))
        for (const auto& l : cfg["tuple"]) {
            MultiIndex mi{};
            for (std::size_t a = 0; a < l.size() && a < kMaxDim; ++a) mi[a] = l[a].get<int>();
            p.tuple.push_back(mi);
        }
    p.s = cfg.at("s").get<double>();
    p.eps = cfg.at("eps").get<double>();
    p.beta = cfg.at("beta").get<double>();
    p.k = cfg.at("k").get<int>();
    return p;
}

SampleSpec sample_spec(const Json& cfg) {
    SampleSpec s;
    s.count = cfg.at("N").get<std::size_t>();
    s.sampler = sampler_from_string(cfg.at("sampler").get<std::string>());
    s.seed = cfg.at("seed").get<std::uint64_t>();
    const Json& init = cfg.at("init");
    s.background = init.at("kind").get<std::string>() == "file" ? 0.0 : init.at("background").get<double>();
    s.alpha = cfg.at("alpha").get<double>();
    s.ck = cfg.at("ck").get<double>();
    s.softening = cfg.at("delta").get<double>();
    return s;
}

InitialData initial_data(const Json& init, const Grid& grid, const std::filesystem::path& base) {
    const int d = grid.dim();
    const double L = grid.box_length();
    const std::string kind = init.at("kind").get<std::string>();
    InitialData out{Field(grid), {}};
    if (kind == "file") {
        std::filesystem::path path = init.at("path").get<std::string>();
        if (path.is_relative() && !base.empty()) path = base / path;
        const Snapshot snap = read_snapshot(path);
        if (snap.grid.dim() != d || snap.grid.box_length() != L)
            throw FormatError(path.string() + ": snapshot dimension or box length differs from the configuration");
        const auto fit = [&](const Field& f) {
            return f.grid.points() == grid.points() ? Field(grid, f.values) : resample(f, grid.points());
        };
        out.rho = fit(snap.get("rho"));
        for (int a = 0; a < d; ++a) {
            const std::string name = "u_" + std::to_string(a + 1);
            out.u.push_back(snap.has(name) ? fit(snap.get(name)) : Field(grid));
        }
    } else {
        const double bg = init.at("background").get<double>();
        const double amp = init.at("amplitude").get<double>();
        const double va = init.at("velocity_amplitude").get<double>();
        for (int a = 0; a < d; ++a) out.u.emplace_back(grid);
        if (kind == "gaussian_bump") {
            const double w = init.at("width").get<double>();
            std::array<double, kMaxDim> c{0.5 * L, 0.5 * L};
            if (init.contains("center")) c = read_vec(init["center"]);
            for (std::size_t i = 0; i < grid.size(); ++i) {
                std::array<double, kMaxDim> z{};
                double r2 = 0.0;
                for (int a = 0; a < d; ++a) {
                    z[a] = grid.coordinate(i, a) - c[a];
                    z[a] -= L * std::floor(z[a] / L + 0.5);
                    r2 += z[a] * z[a];
                }
                const double bump = std::exp(-0.5 * r2 / (w * w));
                out.rho[i] = bg + amp * bump;
                for (int a = 0; a < d; ++a) out.u[a][i] = va * (z[a] / w) * bump;
            }
        } else {
            std::array<double, kMaxDim> m{1.0, 0.0};
            if (init.contains("mode")) m = read_vec(init["mode"]);
            double norm = 0.0;
            for (int a = 0; a < d; ++a) norm += m[a] * m[a];
            norm = std::sqrt(norm);
            for (std::size_t i = 0; i < grid.size(); ++i) {
                double phase = 0.0;
                for (int a = 0; a < d; ++a) phase += grid.k0() * m[a] * grid.coordinate(i, a);
                out.rho[i] = bg + amp * std::cos(phase);
                for (int a = 0; a < d; ++a) out.u[a][i] = va * std::sin(phase) * m[a] / norm;
            }
        }
    }
    const double mollify = init.at("mollify").get<double>();
    if (mollify > 0.0) {
        out.rho = mollify_initial(out.rho, mollify);
        for (auto& c : out.u) c = mollify_initial(c, mollify);
    }
    return out;
}

FlowState initial_state(const Json& cfg, const std::filesystem::path& base) {
    const Grid grid(cfg.at("d").get<int>(), cfg.at("n").get<int>(), cfg.at("L").get<double>());
    InitialData data = initial_data(cfg.at("init"), grid, base);
    const SimParams p = sim_params(cfg);
    FlowState s(Formulation::Primitive, std::move(data.rho), std::move(data.u));
    return convert(s, p.formulation, p.gamma);
}

}  // namespace erz::io
