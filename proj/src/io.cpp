#include "erz/io.hpp"

#include <charconv>
#include <cmath>

namespace erz::io {

std::string format_number(double v) {
    if (!std::isfinite(v)) return "nan";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void ensure_parent(const std::filesystem::path& path) {
    const auto parent = path.parent_path();
    if (parent.empty()) return;
    std::error_code ec;
    std::filesystem::create_directories(parent, ec);
    if (ec) throw IoError("cannot create directory " + parent.string() + ": " + ec.message());
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::vector<std::string> header)
    : path_(path), columns_(header.size()) {
    ensure_parent(path);
    out_.open(path, std::ios::binary | std::ios::trunc);
    if (!out_) throw IoError("cannot open " + path.string() + " for writing");
    row_text(header);
}

CsvWriter::~CsvWriter() {
    if (out_.is_open()) out_.close();
}

void CsvWriter::row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_number(v));
    row_text(cells);
}

void CsvWriter::row_text(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw InvalidArgument("CSV row width differs from the header");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << cells[i];
    }
    out_ << '\n';
    if (!out_) throw IoError("write failed on " + path_.string());
}

void CsvWriter::close() {
    if (!out_.is_open()) return;
    out_.close();
    if (out_.fail()) throw IoError("cannot finish writing " + path_.string());
}

std::vector<std::string> series_header(int dim) {
    std::vector<std::string> h{"t", "mass"};
    for (int a = 1; a <= dim; ++a) h.push_back("mom_" + std::to_string(a));
    for (const char* c : {"E_u", "E_int", "E_K", "E_total", "I", "W", "J", "max_grad_u", "min_rho"}) h.push_back(c);
    return h;
}

std::vector<double> series_row(const EnergyReport& r) {
    std::vector<double> row{r.t, r.mass};
    for (int a = 0; a < r.dim; ++a) row.push_back(r.momentum[a]);
    for (double v : {r.kinetic, r.internal, r.interaction, r.total, r.inertia, r.virial, r.j_functional,
                     r.max_grad_u, r.min_rho})
        row.push_back(v);
    return row;
}

SeriesWriter::SeriesWriter(const std::filesystem::path& path, int dim) : csv_(path, series_header(dim)) {}

void SeriesWriter::add(const EnergyReport& r) {
    if (any_ && !(r.t > last_t_)) return;
    csv_.row(series_row(r));
    any_ = true;
    last_t_ = r.t;
}

namespace {

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

Json certificate_json(const BlowupCertificate& c) {
    Json j;
    j["criterion"] = to_string(c.criterion);
    j["hypotheses_satisfied"] = c.hypotheses_satisfied;
    j["inputs"] = Json::object();
    for (const auto& [k, v] : c.inputs) j["inputs"][k] = number_or_null(v);
    j["constants"] = Json::object();
    for (const auto& [k, v] : c.constants) j["constants"][k] = number_or_null(v);
    j["conditions"] = Json::array();
    for (const auto& cond : c.conditions)
        j["conditions"].push_back({{"name", cond.name},
                                   {"satisfied", cond.satisfied},
                                   {"lhs", number_or_null(cond.lhs)},
                                   {"rhs", number_or_null(cond.rhs)},
                                   {"relation", cond.relation}});
    j["predicted_bound_time"] = c.predicted_bound_time ? number_or_null(*c.predicted_bound_time) : Json(nullptr);
    j["bound_curve"] = {{"kind", c.bound_curve.kind == BoundCurve::Kind::Quadratic ? "quadratic" : "exponential"},
                        {"c0", number_or_null(c.bound_curve.c0)},
                        {"c1", number_or_null(c.bound_curve.c1)},
                        {"c2", number_or_null(c.bound_curve.c2)}};
    j["notes"] = c.notes;
    const auto problems = schema_violations(j, certificate_schema());
    if (!problems.empty()) throw Error("certificate does not match its schema: " + problems.front());
    return j;
}

void write_json(const Json& doc, const std::filesystem::path& path) {
    ensure_parent(path);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << doc.dump(2) << '\n';
    out.close();
    if (out.fail()) throw IoError("cannot finish writing " + path.string());
}

Snapshot state_snapshot(const FlowState& s, double gamma) {
    Snapshot snap(s.grid());
    snap.add("rho", density(s, gamma));
    for (int a = 0; a < s.dim(); ++a) snap.add("u_" + std::to_string(a + 1), s.velocity[a]);
    if (s.formulation != Formulation::Primitive) snap.add("q", s.scalar);
    return snap;
}

Snapshot particle_snapshot(const ParticleEnsemble& e) {
    e.validate();
    const std::size_t n = e.size();
    std::size_t padded = std::max<std::size_t>(8, n + (n % 2));
    const Grid g(1, static_cast<int>(padded), static_cast<double>(padded));
    Snapshot snap(g);
    for (int a = 0; a < e.dim; ++a) {
        Field x(g), v(g);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = e.x[i * e.dim + a];
            v[i] = e.v[i * e.dim + a];
        }
        snap.add("x_" + std::to_string(a + 1), x);
        snap.add("v_" + std::to_string(a + 1), v);
    }
    Field mask(g);
    for (std::size_t i = 0; i < n; ++i) mask[i] = 1.0;
    snap.add("mask", mask);
    return snap;
}

ParticleEnsemble particles_from_snapshot(const Snapshot& snap) {
    if (!snap.has("mask") || !snap.has("x_1")) throw FormatError("not a particle snapshot");
    const Field& mask = snap.get("mask");
    std::size_t n = 0;
    while (n < mask.size() && mask[n] == 1.0) ++n;
    ParticleEnsemble e;
    e.dim = snap.has("x_2") ? 2 : 1;
    e.x.resize(n * e.dim);
    e.v.resize(n * e.dim);
    for (int a = 0; a < e.dim; ++a) {
        const Field& x = snap.get("x_" + std::to_string(a + 1));
        const Field& v = snap.get("v_" + std::to_string(a + 1));
        for (std::size_t i = 0; i < n; ++i) {
            e.x[i * e.dim + a] = x[i];
            e.v[i * e.dim + a] = v[i];
        }
    }
    return e;
}

}  // namespace erz::io
