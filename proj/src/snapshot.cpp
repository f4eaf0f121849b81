#include "erz/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace erz {

namespace {

constexpr char kMagic[4] = {'E', 'R', 'Z', 'F'};

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<unsigned char>((v >> (8 * b)) & 0xffu));
}

void put_f64(std::vector<unsigned char>& out, double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<unsigned char>((bits >> (8 * b)) & 0xffu));
}

class Reader {
  public:
    explicit Reader(const std::vector<unsigned char>& bytes) : bytes_(bytes) {}

    void need(std::size_t count) const {
        if (pos_ + count > bytes_.size()) throw FormatError("ERZF: truncated file");
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(bytes_[pos_ + b]) << (8 * b);
        pos_ += 4;
        return v;
    }
    double f64() {
        need(8);
        std::uint64_t v = 0;
        for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(bytes_[pos_ + b]) << (8 * b);
        pos_ += 8;
        return std::bit_cast<double>(v);
    }
    std::string str(std::size_t len) {
        need(len);
        std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), len);
        pos_ += len;
        return s;
    }
    bool done() const { return pos_ == bytes_.size(); }

  private:
    const std::vector<unsigned char>& bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

void Snapshot::add(std::string name, const Field& f) {
    require_same_grid(grid, f.grid);
    fields.push_back({std::move(name), f});
}

const Field& Snapshot::get(const std::string& name) const {
    for (const auto& e : fields)
        if (e.name == name) return e.field;
    throw FormatError("ERZF: no field named '" + name + "'");
}

bool Snapshot::has(const std::string& name) const {
    for (const auto& e : fields)
        if (e.name == name) return true;
    return false;
}

std::vector<unsigned char> encode_snapshot(const Snapshot& snap) {
    std::vector<unsigned char> out(std::begin(kMagic), std::end(kMagic));
    put_u32(out, Snapshot::kVersion);
    put_u32(out, static_cast<std::uint32_t>(snap.grid.dim()));
    for (int a = 0; a < snap.grid.dim(); ++a) put_u32(out, static_cast<std::uint32_t>(snap.grid.points()));
    put_f64(out, snap.grid.box_length());
    put_u32(out, static_cast<std::uint32_t>(snap.fields.size()));
    for (const auto& e : snap.fields) {
        put_u32(out, static_cast<std::uint32_t>(e.name.size()));
        out.insert(out.end(), e.name.begin(), e.name.end());
    }
    for (const auto& e : snap.fields)
        for (double v : e.field.values) put_f64(out, v);
    return out;
}

Snapshot decode_snapshot(const std::vector<unsigned char>& bytes) {
    Reader r(bytes);
    if (r.str(4) != std::string(kMagic, 4)) throw FormatError("ERZF: bad magic");
    const auto version = r.u32();
    if (version != Snapshot::kVersion)
        throw FormatError("ERZF: unsupported version " + std::to_string(version) + " (expected " +
                          std::to_string(Snapshot::kVersion) + ")");
    const auto dim = r.u32();
    if (dim < 1 || dim > static_cast<std::uint32_t>(kMaxDim)) throw FormatError("ERZF: unsupported dimension");
    std::uint32_t n = 0;
    for (std::uint32_t a = 0; a < dim; ++a) {
        const auto na = r.u32();
        if (a > 0 && na != n) throw FormatError("ERZF: anisotropic grids are not supported");
        n = na;
    }
    const double length = r.f64();
    Grid grid = [&] {
        try {
            return Grid(static_cast<int>(dim), static_cast<int>(n), length);
        } catch (const InvalidArgument& e) {
            throw FormatError(std::string("ERZF: invalid grid: ") + e.what());
        }
    }();
    const auto count = r.u32();
    std::vector<std::string> names;
    for (std::uint32_t f = 0; f < count; ++f) names.push_back(r.str(r.u32()));
    r.need(static_cast<std::size_t>(count) * grid.size() * 8);
    Snapshot snap(grid);
    for (const auto& name : names) {
        Field field(grid);
        for (auto& v : field.values) v = r.f64();
        snap.fields.push_back({name, std::move(field)});
    }
    if (!r.done()) throw FormatError("ERZF: trailing bytes after payload");
    return snap;
}

void write_snapshot(const Snapshot& snap, const std::filesystem::path& path) {
    const auto bytes = encode_snapshot(snap);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

Snapshot read_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_snapshot(bytes);
}

}  // namespace erz
