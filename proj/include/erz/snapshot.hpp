#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "erz/field.hpp"

namespace erz {

/// Binary field container ("ERZF").
///
/// Layout, all integers little-endian:
///   magic "ERZF" | u32 version | u32 d | d x u32 n | f64 L | u32 field count
///   | per field: u32 name length, UTF-8 name | per field: n^d f64 samples, row-major
struct Snapshot {
    static constexpr std::uint32_t kVersion = 1;

    struct Entry {
        std::string name;
        Field field;
    };

    Grid grid;
    std::vector<Entry> fields;

    explicit Snapshot(const Grid& g) : grid(g) {}

    void add(std::string name, const Field& f);
    const Field& get(const std::string& name) const;
    bool has(const std::string& name) const;
};

std::vector<unsigned char> encode_snapshot(const Snapshot& snap);
Snapshot decode_snapshot(const std::vector<unsigned char>& bytes);

void write_snapshot(const Snapshot& snap, const std::filesystem::path& path);
Snapshot read_snapshot(const std::filesystem::path& path);

}  // namespace erz
