#pragma once

#include <iosfwd>
#include <string>

namespace cmg {

enum ExitCode : int {
    kExitSuccess = 0,
    kExitUsage = 1,
    kExitRuntime = 2,
    kExitVerifyFailed = 3,
};

struct CommandOutcome {
    int exit_code = kExitSuccess;
    std::string message;
};

/// Environment variable naming a config file used when --config is absent.
inline constexpr const char* kConfigEnvVar = "CMG_CONFIG";

/// Verbs: simulate, sweep, regress, verify-appendix, ar1. Normal output goes
/// to `out`, diagnostics and usage text to `err`.
CommandOutcome dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cmg
