#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "icrl/core/config.hpp"

namespace icrl::cli {

/// Unknown key, type mismatch or invalid value; the message names the key.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Every accepted dotted key ("episodes", "policy.temperature", ...).
const std::vector<std::string>& known_keys();

std::size_t edit_distance(const std::string& a, const std::string& b);

/// Closest known key to `unknown`, comparing both full keys and their last
/// component; nullopt when nothing is reasonably close.
std::optional<std::string> suggest_key(const std::string& unknown);

/// "policy.temperature=0.7". The value is read as JSON when it parses,
/// otherwise as a string.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Builds and validates a RunConfig. Missing keys take their defaults; the
/// prompt layout defaults per task kind.
RunConfig config_from_json(const nlohmann::json& doc);

/// Reads a JSON config file, resolves its relative paths against the file's
/// directory, applies overrides, then builds the config.
RunConfig parse_config(const std::string& path, const std::vector<std::string>& overrides = {});

nlohmann::json config_to_json(const RunConfig& config);

}  // namespace icrl::cli
