#pragma once

// Command-line driver: discover-inds, induce-bias, learn, evaluate, demo.

#include <ostream>
#include <string>
#include <vector>

namespace automode {

inline constexpr const char* kVersion = "0.1.0";

/// Runs one command. `args` excludes the program name. Returns 0 on success,
/// 1 on invalid input or configuration, 2 on usage errors.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Hex SHA-256 of a file's bytes.
std::string file_digest(const std::string& path);

}  // namespace automode
