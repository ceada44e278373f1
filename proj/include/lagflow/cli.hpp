#pragma once

// Command implementations behind the `lagflow` executable. Each returns the
// process exit code:
//   0  run reached t_end or converged / all verify suites passed
//   1  bad config, unreadable or corrupt snapshot
//   2  a checked property was violated
//   3  the integration failed (non-finite values or collapsing eta)

#include <filesystem>
#include <iosfwd>

#include "lagflow/verify.hpp"

namespace lagflow {

inline constexpr int kExitOk = 0;
inline constexpr int kExitBadInput = 1;
inline constexpr int kExitViolation = 2;
inline constexpr int kExitIntegration = 3;

/// Monotonicity violations up to this fraction of M(0) are tolerated.
inline constexpr double kMonotonicityTolerance = 1e-4;

int cmd_run(const std::filesystem::path& config, std::ostream& log);
int cmd_resume(const std::filesystem::path& snapshot, const std::filesystem::path& config, std::ostream& log);

/// `overrides` replaces the sample counts and mutation flags; its seed is
/// ignored in favour of the config's.
int cmd_verify(const std::filesystem::path& config, std::ostream& log, const VerifyOptions& overrides = {});

}  // namespace lagflow
