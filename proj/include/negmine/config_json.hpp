#pragma once

#include <json.hpp>

#include "negmine/core_types.hpp"

namespace negmine {

/// Reads a ScoreConfig from JSON. Missing keys keep their defaults.
/// "lambda" is either the string "group_size" or a positive number.
ScoreConfig score_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ScoreConfig& config);

}  // namespace negmine
