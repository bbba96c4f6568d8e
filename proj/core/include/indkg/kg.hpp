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

#include <compare>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "indkg/types.hpp"

namespace indkg {

struct RawTriple {
  std::string head;
  std::string relation;
  std::string tail;

  friend bool operator==(const RawTriple&, const RawTriple&) = default;
};

// Reads `head<TAB>relation<TAB>tail` lines. Fields beyond the third are
// ignored, blank lines are skipped, and fields are whitespace-trimmed.
// Throws kMissingFile, or kMalformedLine with the 1-based line number.
std::vector<RawTriple> load_triples(const std::filesystem::path& path);

// Bijective label <-> dense id maps for entities and relations.
class Vocab {
 public:
  EntityId add_entity(std::string_view label);
  RelationId add_relation(std::string_view label);

  std::optional<EntityId> find_entity(std::string_view label) const;
  std::optional<RelationId> find_relation(std::string_view label) const;

  const std::string& entity_label(EntityId id) const { return entities_.at(id); }
  const std::string& relation_label(RelationId id) const { return relations_.at(id); }

  std::size_t num_entities() const { return entities_.size(); }
  std::size_t num_relations() const { return relations_.size(); }

  friend bool operator==(const Vocab& a, const Vocab& b) {
    return a.entities_ == b.entities_ && a.relations_ == b.relations_;
  }

 private:
  std::unordered_map<std::string, EntityId> entity2id_;
  std::unordered_map<std::string, RelationId> relation2id_;
  std::vector<std::string> entities_;
  std::vector<std::string> relations_;
};

// Raw triples of one inductive benchmark: the training KG splits plus the
// test KG's support (ind/train.txt), query (ind/test.txt) and optional
// ind/valid.txt triples.
struct RawSplits {
  std::vector<RawTriple> train;
  std::vector<RawTriple> valid;
  std::vector<RawTriple> test;
  std::vector<RawTriple> support;
  std::vector<RawTriple> query;
  std::vector<RawTriple> ind_valid;
};

// Entity ids follow first appearance over train, valid, test, support, query,
// ind_valid. Relation ids come from train only; a relation in any other
// split that train never uses raises kUnknownRelation. Requires a non-empty
// train split (kEmptyInput).
Vocab build_vocab(const RawSplits& raw);

using TripleList = std::vector<Triple>;

// Encodes against a frozen vocabulary: kUnknownEntity / kUnknownRelation on
// labels the vocabulary does not know.
TripleList encode_triples(std::span<const RawTriple> raw, const Vocab& vocab);

struct AdjEdge {
  EntityId neighbor = 0;
  RelationId rel = 0;

  friend auto operator<=>(const AdjEdge&, const AdjEdge&) = default;
};

// Immutable CSR adjacency over a shared entity id space. out_edges(h) lists
// (t, r) for every stored triple (h, r, t); in_edges(t) lists (h, r). Both
// are sorted by (neighbor, rel). The membership set covers the adjacency
// triples plus any extra known triples (e.g. valid/test or query triples
// that must be filtered but never carry messages).
class IndexedGraph {
 public:
  IndexedGraph() = default;

  std::size_t num_entities() const { return num_entities_; }
  std::size_t num_relations() const { return num_relations_; }
  std::size_t num_triples() const { return triples_.size(); }

  std::span<const AdjEdge> out_edges(EntityId e) const;
  std::span<const AdjEdge> in_edges(EntityId e) const;
  std::size_t degree(EntityId e) const { return out_edges(e).size() + in_edges(e).size(); }

  bool contains(const Triple& t) const;

  // Sorted, unique adjacency triples.
  std::span<const Triple> triples() const { return triples_; }
  // Sorted, unique triples in the membership set.
  std::span<const Triple> known_triples() const { return known_; }
  // Sorted ids of entities touched by any known triple; negative sampling
  // draws from this pool.
  std::span<const EntityId> entities() const { return pool_; }

  friend bool operator==(const IndexedGraph&, const IndexedGraph&) = default;

 private:
  friend IndexedGraph build_graph(std::span<const Triple>, std::size_t, std::size_t,
                                  std::span<const Triple>);

  std::size_t num_entities_ = 0;
  std::size_t num_relations_ = 0;
  std::vector<std::size_t> out_offsets_;
  std::vector<AdjEdge> out_;
  std::vector<std::size_t> in_offsets_;
  std::vector<AdjEdge> in_;
  std::vector<Triple> triples_;
  std::vector<Triple> known_;
  std::vector<EntityId> pool_;
};

// Duplicate triples collapse. Throws kIdOutOfBounds on any id outside
// [0, num_entities) x [0, num_relations).
IndexedGraph build_graph(std::span<const Triple> triples, std::size_t num_entities,
                         std::size_t num_relations, std::span<const Triple> extra_known = {});

struct DatasetBundle {
  Vocab vocab;
  TripleList train;
  TripleList valid;
  TripleList test;
  TripleList support;
  TripleList query;
  TripleList ind_valid;
  // Adjacency: train triples; membership: train + valid + test.
  IndexedGraph train_graph;
  // Adjacency: support triples; membership: support + query + ind_valid.
  IndexedGraph ind_graph;

  friend bool operator==(const DatasetBundle&, const DatasetBundle&) = default;
};

// Reads `<root>/train/{train,valid,test}.txt` and
// `<root>/ind/{train,valid,test}.txt`. train/train.txt, ind/train.txt and
// ind/test.txt are required; the rest are optional.
RawSplits load_raw_dataset(const std::filesystem::path& root);

// Builds vocab, encodes, and validates the inductive split:
//  - duplicates inside one split are dropped with a warning;
//  - a train triple repeated in valid/test, or a support triple repeated in
//    query, raises kLeakedTriple;
//  - an entity shared between the training splits and support/query raises
//    kEntityOverlap.
DatasetBundle assemble_dataset(const RawSplits& raw);

// "IKGD1" bundle file; see docs/formats.md.
std::string serialize_dataset(const DatasetBundle& bundle);
DatasetBundle deserialize_dataset(std::string_view bytes);
void persist_dataset(const DatasetBundle& bundle, const std::filesystem::path& path);
DatasetBundle load_dataset(const std::filesystem::path& path);

}  // namespace indkg
