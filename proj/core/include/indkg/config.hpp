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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "indkg/model.hpp"
#include "indkg/protocols.hpp"
#include "indkg/train.hpp"

namespace indkg {

// Everything a run needs. Built by parse_config from a flat `key = value`
// file plus command-line overrides; every key is listed in config_keys().
struct RunConfig {
  std::filesystem::path data_dir;
  std::filesystem::path output_dir = "out";

  ModelConfig model;  // num_relations is filled in from the dataset
  std::size_t max_nodes = 0;  // 0 = no cap

  TrainOptions train;
  std::size_t eval_num_neg = 50;

  std::optional<std::uint64_t> seed;
  int threads = 1;

  std::uint64_t require_seed() const;  // kMissingRequired if unset
  std::optional<std::size_t> node_cap() const {
    return max_nodes == 0 ? std::nullopt : std::optional<std::size_t>(max_nodes);
  }
  ProtocolOptions protocol_options() const;
  TrainOptions train_options() const;
};

enum class KeyType { kUnsigned, kReal, kBool, kString, kPath, kChoice };

struct ConfigKey {
  std::string name;
  KeyType type;
  std::string help;
  std::vector<std::string> choices;  // kChoice only
  std::function<void(RunConfig&, std::string_view)> set;  // value already type-checked
  std::function<std::string(const RunConfig&)> get;
};

// The key registry, in documentation order.
const std::vector<ConfigKey>& config_keys();

using Override = std::pair<std::string, std::string>;

// Grammar: one `key = value` per line; `#` starts a comment; blank lines are
// ignored; keys and values are whitespace-trimmed. Overrides are applied
// after the file. Errors: kUnknownKey(name), kTypeError(key),
// kMalformedLine(path:line), kMissingFile, kMissingRequired(seed).
RunConfig parse_config(const std::optional<std::filesystem::path>& file,
                       std::span<const Override> overrides);
RunConfig parse_config_text(std::string_view text, std::string_view origin,
                            std::span<const Override> overrides);

// Applies one key; kUnknownKey / kTypeError.
void set_config_value(RunConfig& config, std::string_view key, std::string_view value);

// Current values of every key, in registry order.
nlohmann::ordered_json to_json(const RunConfig& config);

}  // namespace indkg
