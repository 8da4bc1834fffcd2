#pragma once

#include <iosfwd>
#include <string>

#include "sfwm/config.hpp"
#include "sfwm/errors.hpp"

namespace sfwm {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

int exit_code_for(ErrorKind kind);

// sfwm <subcommand> --config <path> [--out <dir>] [--seed <u64>] [--quiet]
// One JSON summary line goes to out, human-readable detail to err.
int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Centers of the jsa section: the given signal frequency or the outermost solved root.
CenterFrequencies solve_centers(const RunConfig& rc, const ProcessSpec& process, const JsaSection& section);
JsaGrid compute_jsa(const RunConfig& rc, const ProcessSpec& process, const JsaSection& section);

}  // namespace sfwm
