#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace heet::cli {

// Exit codes of the `heet` tool.
inline constexpr int kOk = 0;
inline constexpr int kCheckFailed = 1;  // validate-lemmas found a failing check
inline constexpr int kParseError = 2;   // bad flags or unreadable/malformed input
inline constexpr int kDomainError = 3;  // well-formed input violating an invariant

// Runs the tool with argv-style arguments (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace heet::cli
