#pragma once

#include "erz/config.hpp"

namespace erz::io {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitSchema = 2, kExitGuard = 3, kExitIo = 4 };

/// Runs one validated command and writes its artifacts under cfg["output_dir"].
/// Returns kExitOk, or kExitGuard after a guard trip (outputs, final snapshot
/// and certificate are written first). Library errors propagate.
int run_command(Command c, const Json& cfg);

/// run_command with errors mapped to exit codes and reported through the log:
/// SchemaError, InvalidArgument and WrongRegime give 2, IoError and FormatError 4,
/// any other failure 1.
int orchestrate(Command c, const Json& cfg);

}  // namespace erz::io
