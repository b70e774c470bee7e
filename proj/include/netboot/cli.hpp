#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace netboot {

/// Runs one subcommand. `args` excludes the program name. Returns the process
/// exit code: 0 on success, 2 on a validation error (reported on `err` as a
/// JSON object with `error` and `message`).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace netboot
