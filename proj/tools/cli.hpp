#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace susyhom::cli {

// Exit codes: 0 success, 1 input error, 2 precondition or invariant failure.
inline constexpr int kOk = 0;
inline constexpr int kInputError = 1;
inline constexpr int kPreconditionFailure = 2;

// args[0] is the program name, as in argv.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace susyhom::cli
