#pragma once

#include <string>
#include <vector>

namespace climb {
namespace cli {

inline constexpr const char* kVersion = "0.1.0";

// One CLI invocation; args excludes the program name.
// Exit codes: 0 success, 1 usage, 2 data validation, 3 numerical/domain.
int run(std::vector<std::string> args);

} // namespace cli
} // namespace climb
