#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dstc::cli {

inline constexpr const char* kToolVersion = "1.0.0";

// Exit codes
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Entry point shared by the executable and the tests.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Hex SHA-256 of a file's bytes; empty string if unreadable.
std::string file_digest(const std::string& path);

}  // namespace dstc::cli
