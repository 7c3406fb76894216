#pragma once

#include <string>

#include <json.hpp>

#include "pdm/models.hpp"

namespace pdm {

/// {"family": "ml1", "sign": "+", "omega": 1.0, "lambda": 0.1, "A": 1.0, ...}
/// Unknown keys are rejected with InvalidParameter.
ModelFamily model_from_json(const nlohmann::json& doc);
nlohmann::json model_to_json(const ModelFamily& family);

ModelFamily model_from_json_text(const std::string& text);

}  // namespace pdm
