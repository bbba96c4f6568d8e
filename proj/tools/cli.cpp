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

#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "indkg/checkpoint.hpp"
#include "indkg/config.hpp"
#include "indkg/error.hpp"
#include "indkg/kg.hpp"
#include "indkg/logging.hpp"
#include "indkg/metrics.hpp"
#include "indkg/model.hpp"
#include "indkg/protocols.hpp"
#include "indkg/subgraph.hpp"
#include "indkg/subgraph_store.hpp"
#include "indkg/train.hpp"

namespace indkg::cli {
namespace {

namespace fs = std::filesystem;

// Store files written by `extract`: split name, and whether its subgraphs
// live in the training graph (else the inductive support graph).
struct StoreSplit {
  const char* name;
  bool on_train_graph;
};
constexpr StoreSplit kStoreSplits[] = {{"train", true}, {"valid", true}, {"query", false}};

fs::path store_path(const RunConfig& c, std::string_view split) {
  return c.output_dir / ("subgraphs-" + std::string(split) + ".ikgs");
}

const TripleList& split_triples(const DatasetBundle& d, std::string_view split) {
  if (split == "train") return d.train;
  if (split == "valid") return d.valid;
  return d.query;
}

bool is_validation_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMissingFile:
    case ErrorCode::kMalformedLine:
    case ErrorCode::kUnknownRelation:
    case ErrorCode::kUnknownEntity:
    case ErrorCode::kEntityOverlap:
    case ErrorCode::kLeakedTriple:
    case ErrorCode::kUnknownKey:
    case ErrorCode::kTypeError:
    case ErrorCode::kMissingRequired:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kUnknownCompositionOp:
    case ErrorCode::kEmptyInput:
      return true;
    default:
      return false;
  }
}

void require_artifact(const fs::path& path) {
  if (!fs::exists(path)) fail(ErrorCode::kMissingFile, "missing " + path.filename().string());
}

DatasetBundle load_bundle(const RunConfig& c) {
  const fs::path path = c.output_dir / kDatasetFile;
  require_artifact(path);
  return load_dataset(path);
}

// Writes text through a temporary sibling, like every binary artifact.
void write_text(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::kIoError, "cannot write " + tmp.string());
    out << text;
    if (!out.flush()) fail(ErrorCode::kIoError, "cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

nlohmann::ordered_json dataset_summary(const DatasetBundle& d) {
  nlohmann::ordered_json j;
  j["entities"] = d.vocab.num_entities();
  j["relations"] = d.vocab.num_relations();
  j["train"] = d.train.size();
  j["valid"] = d.valid.size();
  j["test"] = d.test.size();
  j["support"] = d.support.size();
  j["query"] = d.query.size();
  j["ind_valid"] = d.ind_valid.size();
  return j;
}

int cmd_preprocess(const RunConfig& c, std::ostream& out) {
  if (c.data_dir.empty()) fail(ErrorCode::kMissingRequired, "data_dir");
  const DatasetBundle bundle = assemble_dataset(load_raw_dataset(c.data_dir));
  fs::create_directories(c.output_dir);
  const fs::path path = c.output_dir / kDatasetFile;
  persist_dataset(bundle, path);
  out << "wrote " << path.string() << " " << dataset_summary(bundle).dump() << "\n";
  return kExitOk;
}

int cmd_extract(const RunConfig& c, std::ostream& out) {
  const DatasetBundle d = load_bundle(c);
  nlohmann::ordered_json stats;
  for (const StoreSplit& s : kStoreSplits) {
    const TripleList& triples = split_triples(d, s.name);
    if (triples.empty()) continue;
    const IndexedGraph& graph = s.on_train_graph ? d.train_graph : d.ind_graph;
    const std::vector<Subgraph> subs =
        extract_all(graph, triples, c.model.k, c.node_cap(), c.threads);
    const fs::path path = store_path(c, s.name);
    write_store(path, subs);
    stats[s.name] = to_json(collect_stats(SubgraphStore::open(path)));
    log::info("wrote " + path.string());
  }
  write_text(c.output_dir / kStatsFile, stats.dump(2) + "\n");
  out << stats.dump(2) << "\n";
  return kExitOk;
}

ModelConfig model_config_for(const RunConfig& c, const DatasetBundle& d) {
  ModelConfig m = c.model;
  m.num_relations = d.vocab.num_relations();
  if (m.family == ModelFamily::kEntity && m.decoder.type == DecoderType::kNone) {
    m.decoder.type = DecoderType::kTransE;
  }
  return m;
}

int cmd_train(const RunConfig& c, std::ostream& out) {
  const DatasetBundle d = load_bundle(c);
  const TrainOptions options = c.train_options();
  ModelParams init = init_model(model_config_for(c, d), options.seed);

  std::string log_text;
  const RecordSink sink = [&log_text](const MetricRecord& r) {
    log::info(to_json(r).dump());
    log_text += to_json(r).dump() + "\n";
  };
  TrainResult result;
  if (init.config.family == ModelFamily::kSubgraph) {
    std::optional<SubgraphStore> store;
    const fs::path sp = store_path(c, "train");
    if (fs::exists(sp)) {
      store.emplace(SubgraphStore::open(sp));
      if (store->size() > 0 && store->read(0).k != init.config.k) {
        fail(ErrorCode::kInvalidArgument, sp.filename().string() +
                                              " was extracted with a different k; re-run extract");
      }
    }
    result = train_subgraph_model(d, std::move(init), options, store ? &*store : nullptr, sink);
  } else {
    result = train_entity_model(d, std::move(init), options, sink);
  }
  write_text(c.output_dir / kMetricsFile, log_text);
  save_checkpoint(c.output_dir / kModelFile, result.params, to_json(c));
  out << "trained " << result.log.size() << " log records, best epoch " << result.best_epoch
      << "; wrote " << (c.output_dir / kModelFile).string() << "\n";
  return kExitOk;
}

int cmd_eval(const RunConfig& c, const std::string& task, std::ostream& out) {
  const fs::path model_path = c.output_dir / kModelFile;
  require_artifact(model_path);
  const DatasetBundle d = load_bundle(c);
  const Checkpoint cp = load_checkpoint(model_path);
  if (cp.params.config.num_relations != d.vocab.num_relations()) {
    fail(ErrorCode::kInvalidArgument, "model.ikgm does not match dataset.ikgd");
  }
  if (d.query.empty()) fail(ErrorCode::kEmptyInput, "dataset has no query triples");

  std::unique_ptr<Scorer> scorer;
  if (cp.params.config.family == ModelFamily::kSubgraph) {
    scorer = std::make_unique<SubgraphModelScorer>(cp.params);
  } else {
    scorer = std::make_unique<EntityModelScorer>(cp.params, d.ind_graph);
  }
  ProtocolOptions po = c.protocol_options();
  po.k = cp.params.config.k;
  const MetricsReport report = task == "lp"
                                   ? run_link_prediction(d.ind_graph, d.query, *scorer, po)
                                   : run_triple_classification(d.ind_graph, d.query, *scorer, po);
  write_text(c.output_dir / kReportFile, to_json(report).dump(2) + "\n");
  out << format_table(report);
  return kExitOk;
}

int cmd_stats(const RunConfig& c, std::ostream& out) {
  const DatasetBundle d = load_bundle(c);
  nlohmann::ordered_json j;
  j["dataset"] = dataset_summary(d);
  nlohmann::ordered_json stores = nlohmann::ordered_json::object();
  for (const StoreSplit& s : kStoreSplits) {
    const fs::path path = store_path(c, s.name);
    if (fs::exists(path)) stores[s.name] = to_json(collect_stats(SubgraphStore::open(path)));
  }
  j["subgraphs"] = stores;
  out << j.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int execute(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  log::init_from_env();
  CLI::App app{"indkg: inductive knowledge-graph pipeline", "indkg"};
  app.require_subcommand(1);

  std::optional<std::string> config_file;
  app.add_option("-c,--config", config_file, "flat `key = value` config file");
  std::map<std::string, std::string> flag_values;
  for (const ConfigKey& key : config_keys()) {
    std::string help = key.help;
    if (!key.choices.empty()) {
      std::string allowed;
      for (const auto& ch : key.choices) allowed += (allowed.empty() ? "" : "|") + ch;
      help += " {" + allowed + "}";
    }
    const std::string def = key.get(RunConfig{});
    if (!def.empty()) help += " [default: " + def + "]";
    app.add_option("--" + key.name, flag_values[key.name], help);
  }

  auto* preprocess = app.add_subcommand("preprocess", "parse raw splits into dataset.ikgd");
  auto* extract = app.add_subcommand("extract", "extract enclosing subgraphs into stores");
  auto* train = app.add_subcommand("train", "train a model; writes model.ikgm and metrics.jsonl");
  auto* eval = app.add_subcommand("eval", "evaluate model.ikgm on the query split");
  auto* stats = app.add_subcommand("stats", "print dataset and subgraph statistics as JSON");
  std::string task = "lp";
  eval->add_option("--task", task, "lp = link prediction, tc = triple classification")
      ->check(CLI::IsMember({"lp", "tc"}));
  for (auto* sub : {preprocess, extract, train, eval, stats}) sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    std::vector<Override> overrides;
    for (const ConfigKey& key : config_keys()) {
      if (app.count("--" + key.name) > 0) overrides.emplace_back(key.name, flag_values[key.name]);
    }
    std::optional<fs::path> file;
    if (config_file) file = fs::path(*config_file);
    const RunConfig config = parse_config(file, overrides);

    if (preprocess->parsed()) return cmd_preprocess(config, out);
    if (extract->parsed()) return cmd_extract(config, out);
    if (train->parsed()) return cmd_train(config, out);
    if (eval->parsed()) return cmd_eval(config, task, out);
    return cmd_stats(config, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_validation_error(e.code()) ? kExitValidation : kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace indkg::cli
