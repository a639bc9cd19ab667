#pragma once

// Strict field readers shared by the config parsers.

#include <initializer_list>
#include <string>
#include <string_view>

#include <json.hpp>

#include "mtt/domain.hpp"
#include "mtt/error.hpp"

namespace mtt::detail {

using nlohmann::json;

inline std::string join_path(std::string_view prefix, std::string_view key) {
  if (prefix.empty()) return std::string(key);
  return std::string(prefix) + "." + std::string(key);
}

/// Throws ConfigError if `obj` carries a key outside `allowed`.
void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed,
                    std::string_view prefix);

double read_number(const json& obj, std::string_view key, std::string_view prefix);
long long read_integer(const json& obj, std::string_view key, std::string_view prefix);
bool read_bool(const json& obj, std::string_view key, std::string_view prefix);
std::string read_string(const json& obj, std::string_view key, std::string_view prefix);
const json& read_object(const json& obj, std::string_view key, std::string_view prefix);
const json& read_array(const json& obj, std::string_view key, std::string_view prefix);

json parse_document(std::string_view text);

ScenarioConfig scenario_from_json(const json& obj, std::string_view prefix);
json scenario_to_json(const ScenarioConfig& config);

}  // namespace mtt::detail
