#pragma once

#include "json.hpp"
#include "lava/workload/generator.hpp"

namespace lava {

void to_json(nlohmann::json& j, const GeneratorConfig& cfg);
/// Missing keys keep the values already in `cfg`.
void from_json(const nlohmann::json& j, GeneratorConfig& cfg);

}  // namespace lava
