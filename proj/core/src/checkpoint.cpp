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

#include "indkg/checkpoint.hpp"

#include <map>
#include <vector>

#include "indkg/binary_io.hpp"
#include "indkg/error.hpp"

namespace indkg {
namespace {

template <typename T>
T field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) fail(ErrorCode::kMissingRequired, std::string("model.") + key);
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    fail(ErrorCode::kTypeError, std::string("model.") + key);
  }
}

}  // namespace

nlohmann::ordered_json to_json(const ModelConfig& c) {
  nlohmann::ordered_json j;
  j["family"] = std::string(to_string(c.family));
  j["layer"] = std::string(to_string(c.layer));
  j["comp_op"] = std::string(to_string(c.comp_op));
  j["decoder"] = std::string(to_string(c.decoder.type));
  j["p_norm"] = c.decoder.p;
  j["gamma"] = c.decoder.gamma;
  j["k"] = c.k;
  j["dim"] = c.dim;
  j["rel_dim"] = c.rel_dim;
  j["num_layers"] = c.num_layers;
  j["num_bases"] = c.num_bases;
  j["num_relations"] = c.num_relations;
  return j;
}

ModelConfig model_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) fail(ErrorCode::kTypeError, "model config must be an object");
  ModelConfig c;
  c.family = parse_model_family(field<std::string>(j, "family"));
  c.layer = parse_layer_kind(field<std::string>(j, "layer"));
  c.comp_op = parse_composition_op(field<std::string>(j, "comp_op"));
  c.decoder.type = parse_decoder_type(field<std::string>(j, "decoder"));
  c.decoder.p = field<int>(j, "p_norm");
  c.decoder.gamma = field<double>(j, "gamma");
  c.k = field<std::uint32_t>(j, "k");
  c.dim = field<std::size_t>(j, "dim");
  c.rel_dim = field<std::size_t>(j, "rel_dim");
  c.num_layers = field<std::size_t>(j, "num_layers");
  c.num_bases = field<std::size_t>(j, "num_bases");
  c.num_relations = field<std::size_t>(j, "num_relations");
  return c;
}

std::string serialize_checkpoint(const ModelParams& params, const nlohmann::ordered_json& config) {
  nlohmann::ordered_json echo = config;
  echo["model"] = to_json(params.config);
  io::ByteWriter w;
  io::put_magic(w, "IKGM", '1');
  w.put_string(echo.dump());
  std::size_t count = 0;
  params.for_each_tensor([&count](const std::string&, const ad::Tensor&) { ++count; });
  w.put_varint(count);
  params.for_each_tensor([&w](const std::string& name, const ad::Tensor& t) {
    w.put_string(name);
    w.put_varint(t.shape.size());
    for (std::size_t d : t.shape) w.put_varint(d);
    for (double x : t.data) w.put_f64(x);
  });
  w.put_u32(io::crc32(w.bytes()));
  return std::move(w).take();
}

Checkpoint deserialize_checkpoint(std::string_view bytes) {
  io::ByteReader r(bytes);
  io::expect_magic(r, "IKGM", '1');
  Checkpoint cp;
  try {
    cp.config = nlohmann::ordered_json::parse(r.get_string());
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::kCorruptRecord, std::string("checkpoint config: ") + e.what());
  }
  if (!cp.config.contains("model")) fail(ErrorCode::kCorruptRecord, "checkpoint lacks model config");
  cp.params = init_model(model_config_from_json(cp.config["model"]), 0);

  std::map<std::string, ad::Tensor*> slots;
  cp.params.for_each_tensor(
      [&slots](const std::string& name, ad::Tensor& t) { slots.emplace(name, &t); });
  const std::uint64_t count = r.get_varint();
  if (count != slots.size()) {
    fail(ErrorCode::kCorruptRecord, "checkpoint holds " + std::to_string(count) +
                                        " tensors, model expects " +
                                        std::to_string(slots.size()));
  }
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::string name = r.get_string();
    auto it = slots.find(name);
    if (it == slots.end()) fail(ErrorCode::kCorruptRecord, "unexpected tensor '" + name + "'");
    ad::Tensor& t = *it->second;
    std::vector<std::size_t> shape(r.get_varint());
    for (std::size_t& d : shape) d = r.get_varint();
    if (shape != t.shape) fail(ErrorCode::kCorruptRecord, "shape mismatch for '" + name + "'");
    for (double& x : t.data) x = r.get_f64();
    slots.erase(it);
  }
  const std::size_t body = r.position();
  const std::uint32_t crc = r.get_u32();
  if (!r.at_end()) fail(ErrorCode::kCorruptRecord, "trailing bytes after checkpoint");
  if (crc != io::crc32(bytes.substr(0, body))) {
    fail(ErrorCode::kCorruptRecord, "checkpoint checksum mismatch");
  }
  return cp;
}

void save_checkpoint(const std::filesystem::path& path, const ModelParams& params,
                     const nlohmann::ordered_json& config) {
  io::write_file(path, serialize_checkpoint(params, config));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  return deserialize_checkpoint(io::read_file(path));
}

}  // namespace indkg
