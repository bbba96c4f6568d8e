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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "indkg/kg.hpp"
#include "indkg/model.hpp"
#include "indkg/optim.hpp"
#include "indkg/subgraph_store.hpp"

namespace indkg {

struct TrainOptions {
  AdamConfig adam;
  std::size_t epochs = 50;
  std::size_t batch_size = 16;
  std::size_t check_per_epoch = 1;
  std::size_t patience = 10;
  double min_delta = 0.0;
  double margin = 10.0;
  std::size_t num_neg = 1;
  bool filtered = true;
  std::optional<std::size_t> max_nodes;
  // Validation triples used per check (0 = all).
  std::size_t valid_limit = 0;
  // Entity-encoding family: meta-tasks per epoch and their shape.
  std::size_t tasks_per_epoch = 10;
  std::size_t region_size = 100;
  double support_frac = 0.8;
  std::uint64_t seed = 0;
  int threads = 1;
};

// One line of metrics.jsonl.
struct MetricRecord {
  std::size_t epoch = 0;
  std::string split;  // "train" or "valid"
  double loss = 0.0;
  std::optional<double> auc;
  std::optional<double> auc_pr;
  double wall_ms = 0.0;
  std::uint64_t seed = 0;
};

nlohmann::ordered_json to_json(const MetricRecord& record);

struct TrainResult {
  ModelParams params;  // best checkpoint by validation AUC-PR, else the last
  std::vector<MetricRecord> log;
  long best_epoch = -1;
  bool stopped_early = false;
};

using RecordSink = std::function<void(const MetricRecord&)>;

// Mini-batch margin training of a subgraph-predicting model on the training
// graph. Each positive is paired with num_neg fresh corruptions per epoch;
// per-instance gradients are reduced in instance order, so results do not
// depend on the thread count. `store`, when given, supplies the positive
// subgraphs (record i must enclose train triple i).
TrainResult train_subgraph_model(const DatasetBundle& data, ModelParams init,
                                 const TrainOptions& options,
                                 const SubgraphStore* store = nullptr,
                                 const RecordSink& sink = {});

// Episodic training of an entity-encoding model: every meta-task derives
// embeddings from its support triples and takes one Adam step on the margin
// loss of its query triples against corruptions inside the task.
TrainResult train_entity_model(const DatasetBundle& data, ModelParams init,
                               const TrainOptions& options, const RecordSink& sink = {});

}  // namespace indkg
