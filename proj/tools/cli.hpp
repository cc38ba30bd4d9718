#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qfactor::cli {

enum ExitCode : int { ok = 0, validation_failed = 1, bad_input = 2 };

/// Runs one subcommand. `args` excludes the program name. The result
/// document goes to `out` (or the --out file); diagnostics go to `err`.
int dispatch(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
             std::ostream& err);

}  // namespace qfactor::cli
