#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "erz/diagnostics.hpp"
#include "erz/flow.hpp"
#include "erz/inequality.hpp"
#include "erz/linear.hpp"
#include "erz/particles.hpp"

namespace erz::io {

using Json = nlohmann::json;

enum class Command { Dispersion, Simulate, Blowup, Particles, Inequalities, Convergence };

const char* to_string(Command c);
Command command_from_string(const std::string& s);

/// Shipped schemas, embedded at build time.
const Json& config_schema_document();
const Json& certificate_schema();

/// Effective draft-07 schema of one command's configuration: global keys,
/// flow keys where relevant, and the command's own keys, unknown keys rejected.
Json command_schema(Command c);

/// Violations of `instance` against a JSON Schema subset (type, enum, const,
/// properties, required, additionalProperties, items, min/maxItems,
/// (exclusive)minimum/maximum, local $ref). Every violation is listed.
std::vector<std::string> schema_violations(const Json& instance, const Json& schema);

/// Fills "default" values of absent properties, recursing into objects.
Json apply_defaults(Json instance, const Json& schema);

/// Reads a JSON document. Throws IoError (unreadable) or SchemaError (malformed).
Json load_json(const std::filesystem::path& path);

/// Sets a dotted key ("init.width") in an object, creating intermediate objects.
void set_path(Json& doc, const std::string& dotted, Json value);

/// Validated configuration with defaults filled. Throws SchemaError listing
/// every schema and range violation.
Json parse_config(Json doc, Command c);
Json parse_config(const std::filesystem::path& path, Command c);

// Typed views of a validated configuration.
SimParams sim_params(const Json& cfg);
DiagnosticsFrame diagnostics_frame(const Json& cfg);
linear::LinearParams linear_params(const Json& cfg);
TestFunctionSpec test_function_spec(const Json& cfg);
SweepParams sweep_params(const Json& cfg);
SampleSpec sample_spec(const Json& cfg);

/// Initial density and velocity described by cfg["init"] on `grid`, mollified
/// when init.mollify > 0. Relative file paths resolve against `base`.
struct InitialData {
    Field rho;
    std::vector<Field> u;
};
InitialData initial_data(const Json& init, const Grid& grid, const std::filesystem::path& base = {});

/// Initial flow state in the configured formulation.
FlowState initial_state(const Json& cfg, const std::filesystem::path& base = {});

}  // namespace erz::io
