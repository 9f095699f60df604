#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fce::cli {

inline constexpr const char* kToolVersion = "0.1.0";

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsageError = 2;
inline constexpr int kInputError = 3;
inline constexpr int kNumericalError = 4;

// Entry point shared by the fce binary and the tests. args[0] is the program
// name. Normal output goes to out, diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fce::cli
