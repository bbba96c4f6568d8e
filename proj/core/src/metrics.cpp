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

#include "indkg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <vector>

#include "indkg/error.hpp"

namespace indkg {

double compute_rank(std::span<const double> scores, std::size_t truth_idx) {
  if (scores.empty()) fail(ErrorCode::kEmptyScores, "cannot rank an empty score list");
  if (truth_idx >= scores.size()) {
    fail(ErrorCode::kIndexOutOfRange, "truth index " + std::to_string(truth_idx) + " of " +
                                          std::to_string(scores.size()));
  }
  const double s = scores[truth_idx];
  std::size_t higher = 0;
  std::size_t equal = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i] > s) {
      ++higher;
    } else if (scores[i] == s && i != truth_idx) {
      ++equal;
    }
  }
  return 1.0 + static_cast<double>(higher) + static_cast<double>(equal) / 2.0;
}

RankingSummary ranking_metrics(std::span<const double> ranks) {
  if (ranks.empty()) fail(ErrorCode::kEmptyInput, "no ranks to aggregate");
  RankingSummary out;
  // Reciprocal ranks are summed per distinct rank, so a list of equal ranks
  // yields exactly 1 / rank.
  std::map<double, std::size_t> rank_counts;
  std::map<int, std::size_t> hit_counts;
  for (double r : ranks) {
    ++rank_counts[r];
    for (int n : kHitsAt) {
      if (r <= n) ++hit_counts[n];
    }
  }
  const auto total = static_cast<double>(ranks.size());
  out.mrr = 0.0;
  for (const auto& [r, count] : rank_counts) {
    out.mrr += (static_cast<double>(count) / total) * (1.0 / r);
  }
  for (int n : kHitsAt) out.hits[n] = static_cast<double>(hit_counts[n]) / total;
  return out;
}

ClassificationSummary classification_metrics(std::span<const double> scores,
                                             std::span<const std::uint8_t> labels) {
  if (scores.size() != labels.size()) {
    fail(ErrorCode::kLengthMismatch, std::to_string(scores.size()) + " scores vs " +
                                         std::to_string(labels.size()) + " labels");
  }
  std::size_t num_pos = 0;
  for (std::uint8_t l : labels) num_pos += l != 0 ? 1 : 0;
  const std::size_t num_neg = labels.size() - num_pos;
  if (num_pos == 0 || num_neg == 0) {
    fail(ErrorCode::kSingleClass, std::to_string(num_pos) + " positives, " +
                                      std::to_string(num_neg) + " negatives");
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  // Walk tie blocks from the highest score down.
  double ap_sum = 0.0;
  double auc_sum = 0.0;  // positive-negative pairs won, ties counted half
  std::size_t seen = 0;
  std::size_t seen_pos = 0;
  for (std::size_t begin = 0; begin < order.size();) {
    std::size_t end = begin;
    std::size_t block_pos = 0;
    while (end < order.size() && scores[order[end]] == scores[order[begin]]) {
      block_pos += labels[order[end]] != 0 ? 1 : 0;
      ++end;
    }
    const std::size_t block = end - begin;
    const std::size_t block_neg = block - block_pos;
    seen += block;
    seen_pos += block_pos;
    ap_sum += static_cast<double>(block_pos) * static_cast<double>(seen_pos) /
              static_cast<double>(seen);
    // Negatives in this block lose to every positive above them and tie
    // with the positives inside it.
    const std::size_t pos_above = seen_pos - block_pos;
    auc_sum += static_cast<double>(block_neg) *
               (static_cast<double>(pos_above) + 0.5 * static_cast<double>(block_pos));
    begin = end;
  }
  ClassificationSummary out;
  out.auc = auc_sum / (static_cast<double>(num_pos) * static_cast<double>(num_neg));
  out.auc_pr = ap_sum / static_cast<double>(num_pos);
  return out;
}

StopDecision early_stop_decision(const MonitorState& state, double value, long epoch) {
  if (!std::isfinite(value)) {
    fail(ErrorCode::kNonFiniteValue, "monitored value at epoch " + std::to_string(epoch));
  }
  StopDecision d;
  d.state = state;
  if (value > state.best_value + state.min_delta) {
    d.is_best = true;
    d.state.best_value = value;
    d.state.best_epoch = epoch;
    d.state.checks_since_best = 0;
  } else {
    ++d.state.checks_since_best;
  }
  d.stop = d.state.checks_since_best >= d.state.patience;
  return d;
}

nlohmann::ordered_json to_json(const MetricsReport& r) {
  nlohmann::ordered_json j;
  const auto opt = [](const std::optional<double>& v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
  };
  j["auc"] = opt(r.auc);
  j["auc_pr"] = opt(r.auc_pr);
  j["mrr"] = opt(r.mrr);
  nlohmann::ordered_json hits = nlohmann::ordered_json::object();
  for (const auto& [n, v] : r.hits) hits[std::to_string(n)] = v;
  j["hits"] = hits;
  j["n_queries"] = r.n_queries;
  j["n_classified"] = r.n_classified;
  j["seed"] = r.seed;
  j["wall_ms"] = r.wall_ms;
  return j;
}

std::string format_table(const MetricsReport& r) {
  std::vector<std::pair<std::string, std::string>> rows;
  const auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return std::string(buf);
  };
  if (r.auc) rows.emplace_back("AUC", num(*r.auc));
  if (r.auc_pr) rows.emplace_back("AUC-PR", num(*r.auc_pr));
  if (r.mrr) rows.emplace_back("MRR", num(*r.mrr));
  for (const auto& [n, v] : r.hits) rows.emplace_back("Hit@" + std::to_string(n), num(v));
  if (r.n_queries > 0) rows.emplace_back("queries", std::to_string(r.n_queries));
  if (r.n_classified > 0) rows.emplace_back("classified", std::to_string(r.n_classified));
  rows.emplace_back("seed", std::to_string(r.seed));
  char wall[32];
  std::snprintf(wall, sizeof wall, "%.1f", r.wall_ms);
  rows.emplace_back("wall_ms", wall);

  std::size_t width = 0;
  for (const auto& row : rows) width = std::max(width, row.first.size());
  std::string out;
  for (const auto& [key, value] : rows) {
    out += key;
    out.append(width - key.size() + 2, ' ');
    out += value;
    out += '\n';
  }
  return out;
}

}  // namespace indkg
