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

#include "indkg/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "indkg/error.hpp"

namespace indkg {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::uint64_t to_unsigned(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) {
    fail(ErrorCode::kTypeError, std::string(key) + ": expected a non-negative integer, got '" +
                                    std::string(v) + "'");
  }
  return out;
}

double to_real(std::string_view key, std::string_view v) {
  const std::string s(v);
  char* end = nullptr;
  const double out = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(out)) {
    fail(ErrorCode::kTypeError, std::string(key) + ": expected a real number, got '" + s + "'");
  }
  return out;
}

bool to_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  fail(ErrorCode::kTypeError, std::string(key) + ": expected true/false, got '" +
                                  std::string(v) + "'");
}

std::string fmt_real(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string fmt_bool(bool v) { return v ? "true" : "false"; }

// Builders keep the registry table below readable.
ConfigKey uint_key(std::string name, std::string help,
                   std::function<std::size_t&(RunConfig&)> ref, std::uint64_t min_value = 1) {
  ConfigKey k;
  k.name = std::move(name);
  k.type = KeyType::kUnsigned;
  k.help = std::move(help);
  const std::string key = k.name;
  k.set = [ref, key, min_value](RunConfig& c, std::string_view v) {
    const std::uint64_t x = to_unsigned(key, v);
    if (x < min_value) {
      fail(ErrorCode::kTypeError, key + ": must be >= " + std::to_string(min_value));
    }
    ref(c) = static_cast<std::size_t>(x);
  };
  k.get = [ref](const RunConfig& c) { return std::to_string(ref(const_cast<RunConfig&>(c))); };
  return k;
}

ConfigKey real_key(std::string name, std::string help, std::function<double&(RunConfig&)> ref,
                   bool allow_zero = false, bool below_one = false) {
  ConfigKey k;
  k.name = std::move(name);
  k.type = KeyType::kReal;
  k.help = std::move(help);
  const std::string key = k.name;
  k.set = [ref, key, allow_zero, below_one](RunConfig& c, std::string_view v) {
    const double x = to_real(key, v);
    if (x < 0.0 || (!allow_zero && x == 0.0)) {
      fail(ErrorCode::kTypeError, key + (allow_zero ? ": must be >= 0" : ": must be > 0"));
    }
    if (below_one && x >= 1.0) fail(ErrorCode::kTypeError, key + ": must be < 1");
    ref(c) = x;
  };
  k.get = [ref](const RunConfig& c) { return fmt_real(ref(const_cast<RunConfig&>(c))); };
  return k;
}

ConfigKey choice_key(std::string name, std::string help, std::vector<std::string> choices,
                     std::function<void(RunConfig&, std::string_view)> set,
                     std::function<std::string(const RunConfig&)> get) {
  ConfigKey k;
  k.name = std::move(name);
  k.type = KeyType::kChoice;
  k.help = std::move(help);
  k.choices = choices;
  const std::string key = k.name;
  k.set = [set, key, choices](RunConfig& c, std::string_view v) {
    if (std::find(choices.begin(), choices.end(), v) == choices.end()) {
      std::string allowed;
      for (const auto& ch : choices) allowed += (allowed.empty() ? "" : "|") + ch;
      fail(ErrorCode::kTypeError, key + ": expected one of " + allowed + ", got '" +
                                      std::string(v) + "'");
    }
    set(c, v);
  };
  k.get = std::move(get);
  return k;
}

std::vector<ConfigKey> build_registry() {
  std::vector<ConfigKey> keys;

  {
    ConfigKey k;
    k.name = "data_dir";
    k.type = KeyType::kPath;
    k.help = "raw dataset root (train/ and ind/ TSV splits); used by preprocess";
    k.set = [](RunConfig& c, std::string_view v) { c.data_dir = std::string(v); };
    k.get = [](const RunConfig& c) { return c.data_dir.string(); };
    keys.push_back(std::move(k));
  }
  {
    ConfigKey k;
    k.name = "output_dir";
    k.type = KeyType::kPath;
    k.help = "directory holding every artifact of the run";
    k.set = [](RunConfig& c, std::string_view v) { c.output_dir = std::string(v); };
    k.get = [](const RunConfig& c) { return c.output_dir.string(); };
    keys.push_back(std::move(k));
  }
  {
    ConfigKey k;
    k.name = "seed";
    k.type = KeyType::kUnsigned;
    k.help = "master random seed (required)";
    k.set = [](RunConfig& c, std::string_view v) { c.seed = to_unsigned("seed", v); };
    k.get = [](const RunConfig& c) { return c.seed ? std::to_string(*c.seed) : std::string(); };
    keys.push_back(std::move(k));
  }
  {
    ConfigKey k;
    k.name = "threads";
    k.type = KeyType::kUnsigned;
    k.help = "worker threads; 1 runs the sequential path";
    k.set = [](RunConfig& c, std::string_view v) {
      const std::uint64_t x = to_unsigned("threads", v);
      if (x < 1 || x > 1024) fail(ErrorCode::kTypeError, "threads: must be in [1, 1024]");
      c.threads = static_cast<int>(x);
    };
    k.get = [](const RunConfig& c) { return std::to_string(c.threads); };
    keys.push_back(std::move(k));
  }

  keys.push_back(choice_key(
      "family", "model family: subgraph (enclosing-subgraph GNN) or entity (relation-derived "
                "entity embeddings + KGE decoder)",
      {"subgraph", "entity"},
      [](RunConfig& c, std::string_view v) { c.model.family = parse_model_family(v); },
      [](const RunConfig& c) { return std::string(to_string(c.model.family)); }));
  keys.push_back(choice_key(
      "layer", "relational layer kind", {"rgcn", "att", "comp"},
      [](RunConfig& c, std::string_view v) { c.model.layer = parse_layer_kind(v); },
      [](const RunConfig& c) { return std::string(to_string(c.model.layer)); }));
  keys.push_back(choice_key(
      "comp_op", "composition operator of comp layers", {"sub", "mult", "corr"},
      [](RunConfig& c, std::string_view v) { c.model.comp_op = parse_composition_op(v); },
      [](const RunConfig& c) { return std::string(to_string(c.model.comp_op)); }));
  keys.push_back(choice_key(
      "decoder", "KGE decoder (none adds no decoder term to subgraph scores)",
      {"none", "transe", "distmult", "rotate"},
      [](RunConfig& c, std::string_view v) { c.model.decoder.type = parse_decoder_type(v); },
      [](const RunConfig& c) { return std::string(to_string(c.model.decoder.type)); }));
  keys.push_back(choice_key(
      "p_norm", "TransE distance norm", {"1", "2"},
      [](RunConfig& c, std::string_view v) { c.model.decoder.p = v == "1" ? 1 : 2; },
      [](const RunConfig& c) { return std::to_string(c.model.decoder.p); }));
  keys.push_back(real_key("gamma", "RotatE margin added to the score",
                          [](RunConfig& c) -> double& { return c.model.decoder.gamma; }));
  {
    ConfigKey k;
    k.name = "k";
    k.type = KeyType::kUnsigned;
    k.help = "hop radius of enclosing subgraphs";
    k.set = [](RunConfig& c, std::string_view v) {
      const std::uint64_t x = to_unsigned("k", v);
      if (x < 1 || x > 100) fail(ErrorCode::kTypeError, "k: must be in [1, 100]");
      c.model.k = static_cast<std::uint32_t>(x);
    };
    k.get = [](const RunConfig& c) { return std::to_string(c.model.k); };
    keys.push_back(std::move(k));
  }
  keys.push_back(uint_key("max_nodes", "cap on subgraph nodes (0 = unbounded)",
                          [](RunConfig& c) -> std::size_t& { return c.max_nodes; }, 0));
  keys.push_back(uint_key("dim", "hidden / entity embedding width",
                          [](RunConfig& c) -> std::size_t& { return c.model.dim; }));
  keys.push_back(uint_key("rel_dim", "relation embedding width",
                          [](RunConfig& c) -> std::size_t& { return c.model.rel_dim; }));
  keys.push_back(uint_key("num_layers", "number of relational layers",
                          [](RunConfig& c) -> std::size_t& { return c.model.num_layers; }));
  keys.push_back(uint_key("num_bases", "basis matrices per layer",
                          [](RunConfig& c) -> std::size_t& { return c.model.num_bases; }));

  keys.push_back(real_key("lr", "Adam learning rate",
                          [](RunConfig& c) -> double& { return c.train.adam.lr; }));
  keys.push_back(real_key("beta1", "Adam first-moment decay",
                          [](RunConfig& c) -> double& { return c.train.adam.beta1; }, true, true));
  keys.push_back(real_key("beta2", "Adam second-moment decay",
                          [](RunConfig& c) -> double& { return c.train.adam.beta2; }, true, true));
  keys.push_back(real_key("adam_eps", "Adam denominator epsilon",
                          [](RunConfig& c) -> double& { return c.train.adam.eps; }));
  keys.push_back(uint_key("batch_size", "training instances per optimizer step",
                          [](RunConfig& c) -> std::size_t& { return c.train.batch_size; }));
  keys.push_back(uint_key("epochs", "maximum training epochs",
                          [](RunConfig& c) -> std::size_t& { return c.train.epochs; }, 0));
  keys.push_back(uint_key("check_per_epoch", "validate every N epochs",
                          [](RunConfig& c) -> std::size_t& { return c.train.check_per_epoch; }));
  keys.push_back(uint_key("patience", "validation checks without improvement before stopping",
                          [](RunConfig& c) -> std::size_t& { return c.train.patience; }));
  keys.push_back(real_key("min_delta", "minimum AUC-PR gain that counts as improvement",
                          [](RunConfig& c) -> double& { return c.train.min_delta; }, true));
  keys.push_back(real_key("margin", "margin of the ranking loss",
                          [](RunConfig& c) -> double& { return c.train.margin; }));
  keys.push_back(uint_key("num_neg", "negatives per training positive",
                          [](RunConfig& c) -> std::size_t& { return c.train.num_neg; }));
  {
    ConfigKey k;
    k.name = "filtered";
    k.type = KeyType::kBool;
    k.help = "reject corruptions that are known true triples";
    k.set = [](RunConfig& c, std::string_view v) { c.train.filtered = to_bool("filtered", v); };
    k.get = [](const RunConfig& c) { return fmt_bool(c.train.filtered); };
    keys.push_back(std::move(k));
  }
  keys.push_back(uint_key("valid_limit", "validation triples per check (0 = all)",
                          [](RunConfig& c) -> std::size_t& { return c.train.valid_limit; }, 0));
  keys.push_back(uint_key("tasks_per_epoch", "meta-tasks per epoch (entity family)",
                          [](RunConfig& c) -> std::size_t& { return c.train.tasks_per_epoch; }));
  keys.push_back(uint_key("region_size", "triples per meta-task region (entity family)",
                          [](RunConfig& c) -> std::size_t& { return c.train.region_size; }, 2));
  keys.push_back(real_key("support_frac", "support share of a meta-task region",
                          [](RunConfig& c) -> double& { return c.train.support_frac; }, false,
                          true));
  keys.push_back(uint_key("eval_num_neg", "negatives per ranking query in link prediction",
                          [](RunConfig& c) -> std::size_t& { return c.eval_num_neg; }));
  return keys;
}

}  // namespace

std::uint64_t RunConfig::require_seed() const {
  if (!seed) fail(ErrorCode::kMissingRequired, "seed");
  return *seed;
}

ProtocolOptions RunConfig::protocol_options() const {
  ProtocolOptions o;
  o.k = model.k;
  o.max_nodes = node_cap();
  o.num_neg = eval_num_neg;
  o.filtered = train.filtered;
  o.seed = require_seed();
  o.threads = threads;
  return o;
}

TrainOptions RunConfig::train_options() const {
  TrainOptions o = train;
  o.max_nodes = node_cap();
  o.seed = require_seed();
  o.threads = threads;
  return o;
}

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = build_registry();
  return keys;
}

void set_config_value(RunConfig& config, std::string_view key, std::string_view value) {
  const auto& keys = config_keys();
  const auto it = std::find_if(keys.begin(), keys.end(),
                               [key](const ConfigKey& k) { return k.name == key; });
  if (it == keys.end()) fail(ErrorCode::kUnknownKey, std::string(key));
  const std::string_view v = trim(value);
  if (v.empty()) fail(ErrorCode::kTypeError, std::string(key) + ": empty value");
  it->set(config, v);
}

RunConfig parse_config_text(std::string_view text, std::string_view origin,
                            std::span<const Override> overrides) {
  RunConfig config;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos || trim(line.substr(0, eq)).empty()) {
      fail(ErrorCode::kMalformedLine, std::string(origin) + ":" + std::to_string(line_no));
    }
    set_config_value(config, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  for (const auto& [key, value] : overrides) set_config_value(config, key, value);
  config.require_seed();
  return config;
}

RunConfig parse_config(const std::optional<std::filesystem::path>& file,
                       std::span<const Override> overrides) {
  std::string text;
  std::string origin = "<flags>";
  if (file) {
    std::ifstream in(*file, std::ios::binary);
    if (!in) fail(ErrorCode::kMissingFile, file->string());
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
    origin = file->string();
  }
  return parse_config_text(text, origin, overrides);
}

nlohmann::ordered_json to_json(const RunConfig& config) {
  nlohmann::ordered_json j;
  for (const ConfigKey& k : config_keys()) j[k.name] = k.get(config);
  return j;
}

}  // namespace indkg
