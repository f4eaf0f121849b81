#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "erz/config.hpp"
#include "erz/diagnostics.hpp"
#include "erz/flow.hpp"
#include "erz/particles.hpp"
#include "erz/snapshot.hpp"

namespace erz::io {

/// Shortest round-trip decimal form; non-finite values print as "nan".
std::string format_number(double v);

/// Comma-separated table with a fixed header. Rows are flushed on close or
/// destruction. Throws IoError when the file cannot be written.
class CsvWriter {
  public:
    CsvWriter(const std::filesystem::path& path, std::vector<std::string> header);
    ~CsvWriter();
    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void row(const std::vector<double>& values);
    void row_text(const std::vector<std::string>& cells);
    void close();

  private:
    std::filesystem::path path_;
    std::ofstream out_;
    std::size_t columns_;
};

/// t, mass, mom_1..mom_d, E_u, E_int, E_K, E_total, I, W, J, max_grad_u, min_rho
std::vector<std::string> series_header(int dim);
std::vector<double> series_row(const EnergyReport& r);

/// Series CSV that keeps t strictly increasing (repeated or earlier times are dropped).
class SeriesWriter {
  public:
    SeriesWriter(const std::filesystem::path& path, int dim);
    void add(const EnergyReport& r);
    void close() { csv_.close(); }

  private:
    CsvWriter csv_;
    bool any_ = false;
    double last_t_ = 0.0;
};

/// Certificate document; non-finite numbers become null. Throws Error when the
/// document does not validate against the shipped certificate schema.
Json certificate_json(const BlowupCertificate& c);

/// Pretty-printed JSON followed by a newline.
void write_json(const Json& doc, const std::filesystem::path& path);

/// Creates the parent directories of `path`.
void ensure_parent(const std::filesystem::path& path);

/// Fields "rho", "u_1".."u_d" and, for the q-forms, "q".
Snapshot state_snapshot(const FlowState& s, double gamma);

/// Particle data on an index grid: one field per coordinate ("x_1", "v_1", ...)
/// padded to an even length of at least 8, plus "mask" (1 for real particles).
Snapshot particle_snapshot(const ParticleEnsemble& e);

/// Positions and velocities back from particle_snapshot (kernel parameters are not stored).
ParticleEnsemble particles_from_snapshot(const Snapshot& snap);

}  // namespace erz::io
