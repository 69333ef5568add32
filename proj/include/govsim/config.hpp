#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "govsim/types.hpp"

namespace govsim::config {

/// A config that does not fit the schema. `keys` lists every offending path.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, std::vector<std::string> keys)
        : std::runtime_error(what), keys(std::move(keys)) {}
    std::vector<std::string> keys;
};

/// Reads YAML or JSON (chosen by extension; .json is JSON, anything else YAML).
/// Throws ConfigError on a parse failure or a missing file.
json load_file(const std::filesystem::path& path);

/// YAML text to JSON. Plain scalars become integers, floats or booleans when
/// they parse as such; quoted scalars stay strings.
json from_yaml(const std::string& text);

/// Splits a document into its runs: either the document itself or each
/// element of its "runs" array.
std::vector<json> runs_of(const json& doc);

/// Offending key paths of `doc` measured against a scenario's defaults.
/// Empty when the document is valid.
std::vector<std::string> schema_errors(const json& doc, const json& defaults);

/// Stable serialization: sorted keys, no whitespace.
std::string canonical(const json& doc);

/// Lowercase hex SHA-256.
std::string sha256_hex(const std::string& bytes);

}  // namespace govsim::config
