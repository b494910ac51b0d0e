#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace addfunc::cli {

inline constexpr const char* kSchemaVersion = "addfunc-1";

/// Runs one subcommand (approx, estimate, risk, lowerbound, rates, probe).
/// `args` excludes the program name. Returns 0 on success, 2 on invalid
/// input or violated preconditions, 1 on numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace addfunc::cli
