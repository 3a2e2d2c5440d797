#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace brainergm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line; `args` excludes the program name. Diagnostics go to
/// `err`, tables printed to the terminal go to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace brainergm::cli
