#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace famiter {

/// Exit codes shared by the commands: 0 success, 1 a declared mapping
/// property was falsified, 2 invalid config / failed validation, 3 inner
/// solver failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFalsified = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitInnerFailure = 3;

struct RunOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<long> horizon;
    bool allow_noncontractive = false;
};

/// Runs a config and writes <out_dir>/trace.csv and <out_dir>/summary.json.
int cmd_run(const std::string& config_path, const std::string& out_dir,
            const RunOverrides& overrides = {});

/// Dry-run of the condition validator; prints one line per condition.
int cmd_validate(const std::string& config_path);

/// Runs the classification checks a zoo entry declares for itself.
int cmd_check_mappings(const std::string& zoo_name, int d, long samples,
                       std::uint64_t seed);

/// Prints the documented zoo names.
int cmd_zoo_list();

}  // namespace famiter
