#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fibra::cli {

inline constexpr const char* kVersion = "0.1.0";

// Exit codes.
inline constexpr int kHolds = 0;
inline constexpr int kFails = 1;
inline constexpr int kMalformed = 2;

// Runs one invocation. `args` excludes the program name. Reports go to
// `out` (or --out), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Lowercase hex SHA-256 of `data`.
std::string sha256_hex(const std::string& data);

}  // namespace fibra::cli
