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

#include "indkg/kg.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include "indkg/binary_io.hpp"
#include "indkg/error.hpp"
#include "indkg/logging.hpp"

namespace indkg {
namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f';
  };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

// Builds CSR offsets + payload from (owner, edge) pairs already sorted by owner.
void build_csr(std::size_t n, std::vector<std::pair<EntityId, AdjEdge>>& rows,
               std::vector<std::size_t>& offsets, std::vector<AdjEdge>& edges) {
  std::sort(rows.begin(), rows.end());
  offsets.assign(n + 1, 0);
  edges.clear();
  edges.reserve(rows.size());
  for (const auto& [owner, edge] : rows) {
    ++offsets[owner + 1];
    edges.push_back(edge);
  }
  for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
}

TripleList dedupe_split(TripleList triples, std::string_view split) {
  std::unordered_set<Triple> seen;
  TripleList out;
  out.reserve(triples.size());
  std::size_t dropped = 0;
  for (const Triple& t : triples) {
    if (seen.insert(t).second) {
      out.push_back(t);
    } else {
      ++dropped;
    }
  }
  if (dropped > 0) {
    log::warn("dropped " + std::to_string(dropped) + " duplicate triple(s) in split '" +
              std::string(split) + "'");
  }
  return out;
}

void check_no_leak(const TripleList& base, const TripleList& other, std::string_view base_name,
                   std::string_view other_name, const Vocab& vocab) {
  const std::unordered_set<Triple> set(base.begin(), base.end());
  for (const Triple& t : other) {
    if (set.contains(t)) {
      fail(ErrorCode::kLeakedTriple,
           "(" + vocab.entity_label(t.head) + ", " + vocab.relation_label(t.rel) + ", " +
               vocab.entity_label(t.tail) + ") appears in both " + std::string(base_name) +
               " and " + std::string(other_name));
    }
  }
}

void write_triples(io::ByteWriter& w, const TripleList& triples) {
  w.put_varint(triples.size());
  for (const Triple& t : triples) {
    w.put_varint(t.head);
    w.put_varint(t.rel);
    w.put_varint(t.tail);
  }
}

TripleList read_triples(io::ByteReader& r, std::size_t ne, std::size_t nr) {
  const std::uint64_t n = r.get_varint();
  // Each triple needs at least three bytes; reject absurd counts early.
  if (n > r.remaining() / 3) fail(ErrorCode::kTruncatedFile, "triple count exceeds file size");
  TripleList out(static_cast<std::size_t>(n));
  for (Triple& t : out) {
    t.head = r.get_varint32();
    t.rel = r.get_varint32();
    t.tail = r.get_varint32();
    if (t.head >= ne || t.tail >= ne || t.rel >= nr) {
      fail(ErrorCode::kIdOutOfBounds, "stored triple references an id outside the vocabulary");
    }
  }
  return out;
}

void build_bundle_graphs(DatasetBundle& b) {
  const std::size_t ne = b.vocab.num_entities();
  const std::size_t nr = b.vocab.num_relations();
  TripleList train_known = b.valid;
  train_known.insert(train_known.end(), b.test.begin(), b.test.end());
  b.train_graph = build_graph(b.train, ne, nr, train_known);
  TripleList ind_known = b.query;
  ind_known.insert(ind_known.end(), b.ind_valid.begin(), b.ind_valid.end());
  b.ind_graph = build_graph(b.support, ne, nr, ind_known);
}

}  // namespace

std::vector<RawTriple> load_triples(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kMissingFile, path.string());
  std::vector<RawTriple> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::string_view rest = line;
    std::string_view fields[3];
    std::size_t got = 0;
    while (got < 3) {
      const std::size_t tab = rest.find('\t');
      fields[got++] = trim(rest.substr(0, tab));
      if (tab == std::string_view::npos) break;
      rest.remove_prefix(tab + 1);
    }
    if (got < 3 || fields[0].empty() || fields[1].empty() || fields[2].empty()) {
      fail(ErrorCode::kMalformedLine, path.string() + ":" + std::to_string(lineno));
    }
    out.push_back({std::string(fields[0]), std::string(fields[1]), std::string(fields[2])});
  }
  return out;
}

EntityId Vocab::add_entity(std::string_view label) {
  auto [it, inserted] =
      entity2id_.try_emplace(std::string(label), static_cast<EntityId>(entities_.size()));
  if (inserted) entities_.emplace_back(label);
  return it->second;
}

RelationId Vocab::add_relation(std::string_view label) {
  auto [it, inserted] =
      relation2id_.try_emplace(std::string(label), static_cast<RelationId>(relations_.size()));
  if (inserted) relations_.emplace_back(label);
  return it->second;
}

std::optional<EntityId> Vocab::find_entity(std::string_view label) const {
  auto it = entity2id_.find(std::string(label));
  if (it == entity2id_.end()) return std::nullopt;
  return it->second;
}

std::optional<RelationId> Vocab::find_relation(std::string_view label) const {
  auto it = relation2id_.find(std::string(label));
  if (it == relation2id_.end()) return std::nullopt;
  return it->second;
}

Vocab build_vocab(const RawSplits& raw) {
  if (raw.train.empty()) fail(ErrorCode::kEmptyInput, "no training triples");
  Vocab vocab;
  for (const RawTriple& t : raw.train) vocab.add_relation(t.relation);
  for (const auto* split :
       {&raw.train, &raw.valid, &raw.test, &raw.support, &raw.query, &raw.ind_valid}) {
    for (const RawTriple& t : *split) {
      if (!vocab.find_relation(t.relation)) fail(ErrorCode::kUnknownRelation, t.relation);
      vocab.add_entity(t.head);
      vocab.add_entity(t.tail);
    }
  }
  return vocab;
}

TripleList encode_triples(std::span<const RawTriple> raw, const Vocab& vocab) {
  TripleList out;
  out.reserve(raw.size());
  for (const RawTriple& t : raw) {
    const auto h = vocab.find_entity(t.head);
    if (!h) fail(ErrorCode::kUnknownEntity, t.head);
    const auto r = vocab.find_relation(t.relation);
    if (!r) fail(ErrorCode::kUnknownRelation, t.relation);
    const auto tail = vocab.find_entity(t.tail);
    if (!tail) fail(ErrorCode::kUnknownEntity, t.tail);
    out.push_back({*h, *r, *tail});
  }
  return out;
}

std::span<const AdjEdge> IndexedGraph::out_edges(EntityId e) const {
  if (e >= num_entities_) fail(ErrorCode::kIdOutOfBounds, "entity " + std::to_string(e));
  return std::span<const AdjEdge>(out_).subspan(out_offsets_[e],
                                                out_offsets_[e + 1] - out_offsets_[e]);
}

std::span<const AdjEdge> IndexedGraph::in_edges(EntityId e) const {
  if (e >= num_entities_) fail(ErrorCode::kIdOutOfBounds, "entity " + std::to_string(e));
  return std::span<const AdjEdge>(in_).subspan(in_offsets_[e],
                                               in_offsets_[e + 1] - in_offsets_[e]);
}

bool IndexedGraph::contains(const Triple& t) const {
  return std::binary_search(known_.begin(), known_.end(), t);
}

IndexedGraph build_graph(std::span<const Triple> triples, std::size_t num_entities,
                         std::size_t num_relations, std::span<const Triple> extra_known) {
  const auto check = [&](const Triple& t) {
    if (t.head >= num_entities || t.tail >= num_entities || t.rel >= num_relations) {
      fail(ErrorCode::kIdOutOfBounds,
           "triple (" + std::to_string(t.head) + ", " + std::to_string(t.rel) + ", " +
               std::to_string(t.tail) + ") outside " + std::to_string(num_entities) + "x" +
               std::to_string(num_relations));
    }
  };
  IndexedGraph g;
  g.num_entities_ = num_entities;
  g.num_relations_ = num_relations;
  g.triples_.assign(triples.begin(), triples.end());
  for (const Triple& t : g.triples_) check(t);
  std::sort(g.triples_.begin(), g.triples_.end());
  g.triples_.erase(std::unique(g.triples_.begin(), g.triples_.end()), g.triples_.end());

  std::vector<std::pair<EntityId, AdjEdge>> rows;
  rows.reserve(g.triples_.size());
  for (const Triple& t : g.triples_) rows.push_back({t.head, {t.tail, t.rel}});
  build_csr(num_entities, rows, g.out_offsets_, g.out_);
  rows.clear();
  for (const Triple& t : g.triples_) rows.push_back({t.tail, {t.head, t.rel}});
  build_csr(num_entities, rows, g.in_offsets_, g.in_);

  g.known_ = g.triples_;
  for (const Triple& t : extra_known) {
    check(t);
    g.known_.push_back(t);
  }
  std::sort(g.known_.begin(), g.known_.end());
  g.known_.erase(std::unique(g.known_.begin(), g.known_.end()), g.known_.end());

  for (const Triple& t : g.known_) {
    g.pool_.push_back(t.head);
    g.pool_.push_back(t.tail);
  }
  std::sort(g.pool_.begin(), g.pool_.end());
  g.pool_.erase(std::unique(g.pool_.begin(), g.pool_.end()), g.pool_.end());
  return g;
}

RawSplits load_raw_dataset(const std::filesystem::path& root) {
  const auto optional_split = [](const std::filesystem::path& p) {
    return std::filesystem::exists(p) ? load_triples(p) : std::vector<RawTriple>{};
  };
  RawSplits raw;
  raw.train = load_triples(root / "train" / "train.txt");
  raw.valid = optional_split(root / "train" / "valid.txt");
  raw.test = optional_split(root / "train" / "test.txt");
  raw.support = load_triples(root / "ind" / "train.txt");
  raw.query = load_triples(root / "ind" / "test.txt");
  raw.ind_valid = optional_split(root / "ind" / "valid.txt");
  return raw;
}

DatasetBundle assemble_dataset(const RawSplits& raw) {
  DatasetBundle b;
  b.vocab = build_vocab(raw);
  b.train = dedupe_split(encode_triples(raw.train, b.vocab), "train");
  b.valid = dedupe_split(encode_triples(raw.valid, b.vocab), "valid");
  b.test = dedupe_split(encode_triples(raw.test, b.vocab), "test");
  b.support = dedupe_split(encode_triples(raw.support, b.vocab), "support");
  b.query = dedupe_split(encode_triples(raw.query, b.vocab), "query");
  b.ind_valid = dedupe_split(encode_triples(raw.ind_valid, b.vocab), "ind_valid");

  check_no_leak(b.train, b.valid, "train", "valid", b.vocab);
  check_no_leak(b.train, b.test, "train", "test", b.vocab);
  check_no_leak(b.support, b.query, "support", "query", b.vocab);

  std::vector<bool> seen_in_training(b.vocab.num_entities(), false);
  for (const auto* split : {&b.train, &b.valid, &b.test}) {
    for (const Triple& t : *split) {
      seen_in_training[t.head] = true;
      seen_in_training[t.tail] = true;
    }
  }
  for (const auto* split : {&b.support, &b.query, &b.ind_valid}) {
    for (const Triple& t : *split) {
      for (EntityId e : {t.head, t.tail}) {
        if (seen_in_training[e]) {
          fail(ErrorCode::kEntityOverlap,
               "entity '" + b.vocab.entity_label(e) + "' occurs in both training and test KG");
        }
      }
    }
  }
  build_bundle_graphs(b);
  return b;
}

std::string serialize_dataset(const DatasetBundle& b) {
  io::ByteWriter w;
  io::put_magic(w, "IKGD", '1');
  w.put_varint(b.vocab.num_entities());
  for (EntityId e = 0; e < b.vocab.num_entities(); ++e) w.put_string(b.vocab.entity_label(e));
  w.put_varint(b.vocab.num_relations());
  for (RelationId r = 0; r < b.vocab.num_relations(); ++r) {
    w.put_string(b.vocab.relation_label(r));
  }
  for (const auto* split : {&b.train, &b.valid, &b.test, &b.support, &b.query, &b.ind_valid}) {
    write_triples(w, *split);
  }
  const std::uint32_t crc = io::crc32(w.bytes());
  w.put_u32(crc);
  return std::move(w).take();
}

DatasetBundle deserialize_dataset(std::string_view bytes) {
  io::ByteReader r(bytes);
  io::expect_magic(r, "IKGD", '1');
  DatasetBundle b;
  const std::uint64_t ne = r.get_varint();
  if (ne > r.remaining()) fail(ErrorCode::kTruncatedFile, "entity count exceeds file size");
  for (std::uint64_t i = 0; i < ne; ++i) {
    const std::string label = r.get_string();
    if (b.vocab.add_entity(label) != i) fail(ErrorCode::kCorruptRecord, "duplicate entity label");
  }
  const std::uint64_t nr = r.get_varint();
  if (nr > r.remaining()) fail(ErrorCode::kTruncatedFile, "relation count exceeds file size");
  for (std::uint64_t i = 0; i < nr; ++i) {
    const std::string label = r.get_string();
    if (b.vocab.add_relation(label) != i) {
      fail(ErrorCode::kCorruptRecord, "duplicate relation label");
    }
  }
  for (auto* split : {&b.train, &b.valid, &b.test, &b.support, &b.query, &b.ind_valid}) {
    *split = read_triples(r, ne, nr);
  }
  const std::size_t body = r.position();
  const std::uint32_t crc = r.get_u32();
  if (!r.at_end()) fail(ErrorCode::kCorruptRecord, "trailing bytes after dataset checksum");
  if (crc != io::crc32(bytes.substr(0, body))) {
    fail(ErrorCode::kCorruptRecord, "dataset checksum mismatch");
  }
  build_bundle_graphs(b);
  return b;
}

void persist_dataset(const DatasetBundle& bundle, const std::filesystem::path& path) {
  io::write_file(path, serialize_dataset(bundle));
}

DatasetBundle load_dataset(const std::filesystem::path& path) {
  return deserialize_dataset(io::read_file(path));
}

}  // namespace indkg
