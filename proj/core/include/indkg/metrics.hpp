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
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

namespace indkg {

// Mean-tie rank of scores[truth_idx]: 1 + #{strictly higher} + #{other
// equal} / 2. kEmptyScores on empty input, kIndexOutOfRange on a bad index.
double compute_rank(std::span<const double> scores, std::size_t truth_idx);

struct RankingSummary {
  double mrr = 0.0;
  std::map<int, double> hits;  // N -> fraction of ranks <= N
};

inline constexpr int kHitsAt[] = {1, 5, 10};

// kEmptyInput on no ranks.
RankingSummary ranking_metrics(std::span<const double> ranks);

struct ClassificationSummary {
  double auc = 0.0;
  double auc_pr = 0.0;
};

// auc: P(s_pos > s_neg) + P(s_pos = s_neg) / 2 over all pairs.
// auc_pr: average precision with tied scores treated as one block.
// kSingleClass unless both labels occur; kLengthMismatch on unequal lengths.
ClassificationSummary classification_metrics(std::span<const double> scores,
                                             std::span<const std::uint8_t> labels01);

// Early-stopping monitor for a maximised metric.
struct MonitorState {
  double best_value = -std::numeric_limits<double>::infinity();
  long best_epoch = -1;
  std::size_t checks_since_best = 0;
  std::size_t patience = 10;
  double min_delta = 0.0;
};

struct StopDecision {
  MonitorState state;
  bool stop = false;
  bool is_best = false;
};

// is_best iff value > best_value + min_delta; stop iff checks_since_best
// reaches patience. kNonFiniteValue on NaN or infinite input.
StopDecision early_stop_decision(const MonitorState& state, double value, long epoch);

struct MetricsReport {
  std::optional<double> auc;
  std::optional<double> auc_pr;
  std::optional<double> mrr;
  std::map<int, double> hits;
  std::size_t n_queries = 0;
  std::size_t n_classified = 0;
  std::uint64_t seed = 0;
  double wall_ms = 0.0;
};

// Unset metrics serialise as null. `wall_ms` is the only field that varies
// between identical runs.
nlohmann::ordered_json to_json(const MetricsReport& report);
// Two-column aligned table, one metric per line.
std::string format_table(const MetricsReport& report);

}  // namespace indkg
