#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace mbqc::cli {

/// Entry point behind the executable: parses argv-style arguments, runs the
/// subcommand, and writes the selected report format. Exit codes: 0 success,
/// 2 invalid arguments, 1 internal failure.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

/// Minimal structural validator for the shipped report schemas: checks
/// "type", "required" and "properties"/"items" recursively.
bool validate_against_schema(const nlohmann::json& payload,
                             const nlohmann::json& schema,
                             std::string* error = nullptr);

}  // namespace mbqc::cli
