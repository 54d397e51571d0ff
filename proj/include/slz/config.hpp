#pragma once

#include "slz/engine.hpp"
#include "slz/mission.hpp"
#include "slz/temporal.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace slz {

// Every tunable of the pipeline in one document. All defaults live in the
// member initializers of the component param structs.
struct PipelineConfig {
    AttributeParams attributes;
    RelationParams relations;
    EngineParams engine;
    MfvParams mfv;
    MissionConfig mission;
    GridParams grid;
};

nlohmann::ordered_json config_to_json(const PipelineConfig& config);

// Strict parse: unknown keys anywhere are an error, values are validated.
PipelineConfig config_from_json(const nlohmann::json& doc);

PipelineConfig load_config(const std::string& path);

}  // namespace slz
