#pragma once

#include <string>
#include <vector>

namespace latentry {

inline constexpr const char* kToolVersion = "0.1.0";

// Exit codes: 0 ok, 2 configuration error, 3 data error, 4 numeric
// divergence.
int run_cli(const std::vector<std::string>& args);

} // namespace latentry
