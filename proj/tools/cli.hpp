#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace bergman::cli {

inline constexpr const char* kToolVersion = "0.1.0";

struct RunManifest {
    std::string command;
    std::map<std::string, std::string> parameters;
    std::uint64_t seed = 0;
    std::string tool_version = kToolVersion;
    std::string timestamp;
};

/// RFC-4180 field quoting.
std::string csv_field(const std::string& s);

/// Runs one subcommand; args excludes the program name. Returns 0, 2 (validation) or 3 (numerical).
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bergman::cli
