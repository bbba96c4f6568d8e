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

#include "indkg/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "indkg/error.hpp"
#include "indkg/logging.hpp"
#include "indkg/metrics.hpp"
#include "indkg/parallel.hpp"
#include "indkg/protocols.hpp"
#include "indkg/sampling.hpp"

namespace indkg {
namespace {

// Stream tags keep the per-purpose RNG streams of one master seed apart.
constexpr std::uint64_t kShuffleStream = 0x5348554646ULL;
constexpr std::uint64_t kNegativeStream = 0x4e4547ULL;
constexpr std::uint64_t kValidStream = 0x56414cULL;
constexpr std::uint64_t kTaskStream = 0x5441534bULL;

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t tag, std::uint64_t index) {
  Rng rng = item_rng(seed ^ (tag * 0x9e3779b97f4a7c15ULL), index);
  return rng();
}

class Clock {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string describe(const Triple& t) {
  return "(" + std::to_string(t.head) + ", " + std::to_string(t.rel) + ", " +
         std::to_string(t.tail) + ")";
}

void check_loss(double loss, std::size_t epoch, const std::string& where) {
  if (std::isfinite(loss)) return;
  log::error("non-finite loss at epoch " + std::to_string(epoch) + ", " + where);
  fail(ErrorCode::kNonFiniteLoss, "epoch " + std::to_string(epoch) + ", " + where);
}

// Validation: a fixed classification batch over the validation triples,
// scored at every check; the loss pairs positive i with negative i.
class Validator {
 public:
  Validator(const DatasetBundle& data, const TrainOptions& o, bool extract) : options_(o) {
    if (data.valid.empty()) return;
    std::span<const Triple> triples = data.valid;
    if (o.valid_limit > 0 && triples.size() > o.valid_limit) {
      triples = triples.first(o.valid_limit);
    }
    SampleOptions s;
    s.k = 0;
    s.max_nodes = o.max_nodes;
    s.filtered = o.filtered;
    s.extract = extract;
    pending_ = triples;
    sample_ = s;
    graph_ = &data.train_graph;
  }

  bool enabled() const { return graph_ != nullptr; }

  MetricRecord check(const Scorer& scorer, std::uint32_t k, std::size_t epoch) {
    if (!built_) {
      sample_.k = k;
      batch_ = make_classification_batch(*graph_, pending_,
                                         stream_seed(options_.seed, kValidStream, 0), sample_,
                                         options_.threads);
      built_ = true;
    }
    const std::vector<double> scores = score_candidates(scorer, batch_.items, options_.threads);
    const std::size_t p = batch_.num_positive;
    const std::span<const double> all(scores);
    MetricRecord rec;
    rec.epoch = epoch;
    rec.split = "valid";
    rec.loss = margin_loss(all.first(p), all.subspan(p, p), options_.margin);
    check_loss(rec.loss, epoch, "validation");
    const ClassificationSummary m = classification_metrics(scores, batch_.labels01);
    rec.auc = m.auc;
    rec.auc_pr = m.auc_pr;
    rec.seed = options_.seed;
    return rec;
  }

 private:
  const TrainOptions& options_;
  const IndexedGraph* graph_ = nullptr;
  std::span<const Triple> pending_;
  SampleOptions sample_;
  bool built_ = false;
  ClassificationBatch batch_;
};

// Shared epoch bookkeeping: logging, validation checks and early stopping.
class Monitor {
 public:
  Monitor(const TrainOptions& o, const RecordSink& sink, TrainResult& result)
      : options_(o), sink_(sink), result_(result) {
    state_.patience = o.patience;
    state_.min_delta = o.min_delta;
  }

  void emit(MetricRecord rec) {
    rec.wall_ms = clock_.ms();
    rec.seed = options_.seed;
    if (sink_) sink_(rec);
    result_.log.push_back(std::move(rec));
  }

  bool due(std::size_t epoch) const {
    return options_.check_per_epoch > 0 && epoch % options_.check_per_epoch == 0;
  }

  // Returns true when training should stop.
  bool observe(const MetricRecord& rec, const ModelParams& params) {
    const StopDecision d = early_stop_decision(state_, *rec.auc_pr, static_cast<long>(rec.epoch));
    state_ = d.state;
    if (d.is_best) {
      best_ = params;
      result_.best_epoch = static_cast<long>(rec.epoch);
    }
    if (d.stop) {
      log::info("early stop at epoch " + std::to_string(rec.epoch) + ", best epoch " +
                std::to_string(result_.best_epoch));
      result_.stopped_early = true;
    }
    return d.stop;
  }

  void finish(ModelParams last) {
    result_.params = best_ ? std::move(*best_) : std::move(last);
    result_.params.zero_grad();
  }

 private:
  const TrainOptions& options_;
  const RecordSink& sink_;
  TrainResult& result_;
  MonitorState state_;
  std::optional<ModelParams> best_;
  Clock clock_;
};

void accumulate_grads(ModelParams& into, ModelParams& from, double weight) {
  std::vector<ad::Tensor*> src;
  from.for_each_tensor([&src](const std::string&, ad::Tensor& t) { src.push_back(&t); });
  std::size_t i = 0;
  into.for_each_tensor([&](const std::string&, ad::Tensor& t) {
    const ad::Tensor& s = *src[i++];
    if (t.grad.size() != t.size()) t.grad.assign(t.size(), 0.0);
    if (s.grad.empty()) return;
    for (std::size_t j = 0; j < t.size(); ++j) t.grad[j] += weight * s.grad[j];
  });
}

}  // namespace

nlohmann::ordered_json to_json(const MetricRecord& r) {
  nlohmann::ordered_json j;
  j["epoch"] = r.epoch;
  j["split"] = r.split;
  j["loss"] = r.loss;
  j["auc"] = r.auc ? nlohmann::ordered_json(*r.auc) : nlohmann::ordered_json(nullptr);
  j["auc_pr"] = r.auc_pr ? nlohmann::ordered_json(*r.auc_pr) : nlohmann::ordered_json(nullptr);
  j["wall_ms"] = r.wall_ms;
  j["seed"] = r.seed;
  return j;
}

TrainResult train_subgraph_model(const DatasetBundle& data, ModelParams init,
                                 const TrainOptions& o, const SubgraphStore* store,
                                 const RecordSink& sink) {
  if (init.config.family != ModelFamily::kSubgraph) {
    fail(ErrorCode::kInvalidArgument, "train_subgraph_model needs a subgraph-predicting model");
  }
  if (o.batch_size == 0 || o.num_neg == 0) {
    fail(ErrorCode::kInvalidArgument, "batch_size and num_neg must be positive");
  }
  const std::uint32_t k = init.config.k;
  const IndexedGraph& graph = data.train_graph;
  const TripleList& train = data.train;
  if (store != nullptr && store->size() != train.size()) {
    fail(ErrorCode::kInvalidArgument, "subgraph store holds " + std::to_string(store->size()) +
                                          " records for " + std::to_string(train.size()) +
                                          " training triples");
  }

  TrainResult result;
  result.params = init;
  Monitor monitor(o, sink, result);
  Validator validator(data, o, true);
  ModelParams params = std::move(init);
  Adam adam(o.adam);
  const NegativeSpec spec{CorruptMode::kBoth, o.num_neg, o.filtered};

  for (std::size_t epoch = 1; epoch <= o.epochs; ++epoch) {
    std::vector<std::size_t> order(train.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng shuffle_rng = item_rng(stream_seed(o.seed, kShuffleStream, 0), epoch);
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    const std::uint64_t neg_seed = stream_seed(o.seed, kNegativeStream, epoch);

    double epoch_loss = 0.0;
    for (std::size_t begin = 0; begin < order.size(); begin += o.batch_size) {
      const std::size_t end = std::min(order.size(), begin + o.batch_size);
      const std::size_t n = end - begin;
      std::vector<ModelParams> grads(n);
      std::vector<double> losses(n);
      parallel_for(n, o.threads, [&](std::size_t j) {
        const std::size_t pos_index = begin + j;
        const std::size_t ti = order[pos_index];
        Rng rng = item_rng(neg_seed, pos_index);
        LabeledSubgraph pos;
        if (store != nullptr) {
          Subgraph sub = store->read(ti);
          if (sub.target != train[ti] || sub.k != k) {
            fail(ErrorCode::kInvalidArgument,
                 "subgraph store record " + std::to_string(ti) + " does not match the dataset");
          }
          pos = make_labeled(std::move(sub));
        } else {
          pos = make_labeled(graph, train[ti], k, o.max_nodes);
        }
        const TrainInstance inst =
            make_train_instance(graph, std::move(pos), k, spec, rng, o.max_nodes);
        ModelParams local = params;
        local.zero_grad();
        ad::Tape tape;
        const BoundModel bound = bind_model(tape, local);
        const ad::Var s_pos = subgraph_score(tape, bound, inst.pos);
        ad::Var total;
        for (const LabeledSubgraph& neg : inst.negs) {
          const ad::Var s_neg = subgraph_score(tape, bound, neg);
          const ad::Var term = ad::relu(ad::add_scalar(ad::sub(s_neg, s_pos), o.margin));
          total = total.valid() ? ad::add(total, term) : term;
        }
        const ad::Var loss = ad::scale(total, 1.0 / static_cast<double>(inst.negs.size()));
        losses[j] = loss.scalar();
        check_loss(losses[j], epoch, "train triple " + describe(inst.pos_triple));
        tape.backward(loss);
        grads[j] = std::move(local);
      });
      params.zero_grad();
      for (std::size_t j = 0; j < n; ++j) {
        accumulate_grads(params, grads[j], 1.0 / static_cast<double>(n));
        epoch_loss += losses[j];
      }
      adam.step(params);
    }

    MetricRecord rec;
    rec.epoch = epoch;
    rec.split = "train";
    rec.loss = train.empty() ? 0.0 : epoch_loss / static_cast<double>(train.size());
    monitor.emit(rec);

    if (validator.enabled() && monitor.due(epoch)) {
      const SubgraphModelScorer scorer(params);
      const MetricRecord v = validator.check(scorer, k, epoch);
      monitor.emit(v);
      if (monitor.observe(v, params)) break;
    }
  }
  monitor.finish(std::move(params));
  return result;
}

TrainResult train_entity_model(const DatasetBundle& data, ModelParams init,
                               const TrainOptions& o, const RecordSink& sink) {
  if (init.config.family != ModelFamily::kEntity) {
    fail(ErrorCode::kInvalidArgument, "train_entity_model needs an entity-encoding model");
  }
  if (o.tasks_per_epoch == 0 || o.num_neg == 0) {
    fail(ErrorCode::kInvalidArgument, "tasks_per_epoch and num_neg must be positive");
  }
  const IndexedGraph& graph = data.train_graph;
  const std::size_t ne = graph.num_entities();
  const std::size_t nr = graph.num_relations();

  TrainResult result;
  result.params = init;
  Monitor monitor(o, sink, result);
  Validator validator(data, o, false);
  ModelParams params = std::move(init);
  Adam adam(o.adam);

  for (std::size_t epoch = 1; epoch <= o.epochs; ++epoch) {
    double epoch_loss = 0.0;
    for (std::size_t task_i = 0; task_i < o.tasks_per_epoch; ++task_i) {
      Rng rng = item_rng(stream_seed(o.seed, kTaskStream, epoch), task_i);
      const MetaTask task = sample_meta_task(graph, o.region_size, o.support_frac, rng);
      const IndexedGraph task_graph = build_graph(task.support, ne, nr, task.query);
      const std::span<const EntityId> entities = task_graph.entities();
      std::unordered_map<EntityId, std::uint32_t> row;
      for (std::uint32_t i = 0; i < entities.size(); ++i) row.emplace(entities[i], i);
      const Incidence inc = build_incidence(task.support, entities);

      std::vector<std::uint32_t> ph, pr, pt, nh, nrel, nt;
      for (const Triple& q : task.query) {
        for (std::size_t j = 0; j < o.num_neg; ++j) {
          const Triple neg = corrupt_triple(q, task_graph, CorruptMode::kBoth, rng, o.filtered);
          ph.push_back(row.at(q.head));
          pr.push_back(q.rel);
          pt.push_back(row.at(q.tail));
          nh.push_back(row.at(neg.head));
          nrel.push_back(neg.rel);
          nt.push_back(row.at(neg.tail));
        }
      }
      params.zero_grad();
      ad::Tape tape;
      const BoundModel bound = bind_model(tape, params);
      const ad::Var emb = entity_embeddings(bound.entity_psi, inc);
      const ad::Var pos = entity_triple_scores(bound, emb, std::move(ph), std::move(pr),
                                               std::move(pt));
      const ad::Var neg = entity_triple_scores(bound, emb, std::move(nh), std::move(nrel),
                                               std::move(nt));
      const ad::Var loss = margin_loss(pos, neg, o.margin);
      check_loss(loss.scalar(), epoch, "meta-task " + std::to_string(task_i));
      epoch_loss += loss.scalar();
      tape.backward(loss);
      adam.step(params);
    }

    MetricRecord rec;
    rec.epoch = epoch;
    rec.split = "train";
    rec.loss = epoch_loss / static_cast<double>(o.tasks_per_epoch);
    monitor.emit(rec);

    if (validator.enabled() && monitor.due(epoch)) {
      const EntityModelScorer scorer(params, graph);
      const MetricRecord v = validator.check(scorer, params.config.k, epoch);
      monitor.emit(v);
      if (monitor.observe(v, params)) break;
    }
  }
  monitor.finish(std::move(params));
  return result;
}

}  // namespace indkg
