#pragma once

namespace stefan {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNotConverged = 1;
inline constexpr int kExitConfig = 2;

/// Entry point of the `stefan` tool; subcommands solve, study, operators, refine, residual.
int cli_main(int argc, const char* const* argv);

}  // namespace stefan
