#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ulrich {

inline constexpr const char* kCertificateVersion = "1";

// Runs one subcommand; `args` excludes the program name. Returns the exit
// code: 0 success or verified, 1 input error, 2 mathematical failure,
// 3 budget exhausted.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ulrich
