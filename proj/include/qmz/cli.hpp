#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qmz {

inline constexpr const char* kVersion = "0.1.0";

// Parses and executes one command line (argv without the program name).
// Results go to out, diagnostics to err. Returns the process exit status:
// 0 on success, 2 for usage or validation errors, 1 for internal errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace qmz
