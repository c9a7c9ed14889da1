#pragma once

#include <iosfwd>

namespace kstab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumeric = 3;

/// Command-line entry point. The JSON report goes to `out`, diagnostics to `err`.
/// Returns 0 on success, 2 on validation errors, 3 on numeric failures.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kstab
