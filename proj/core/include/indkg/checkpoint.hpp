// Copyright 2026 The indkg Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "indkg/model.hpp"

namespace indkg {

nlohmann::ordered_json to_json(const ModelConfig& config);
// kTypeError / kMissingRequired on a malformed object.
ModelConfig model_config_from_json(const nlohmann::json& j);

struct Checkpoint {
  nlohmann::ordered_json config;  // run configuration echo; "model" holds the ModelConfig
  ModelParams params;
};

// IKGM1: magic, config echo (JSON text), named tensor blobs
// (name, shape, f64 data), CRC32 of everything before it.
std::string serialize_checkpoint(const ModelParams& params, const nlohmann::ordered_json& config);
Checkpoint deserialize_checkpoint(std::string_view bytes);

void save_checkpoint(const std::filesystem::path& path, const ModelParams& params,
                     const nlohmann::ordered_json& config);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace indkg
