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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "indkg/subgraph.hpp"

namespace indkg {

// Record payload (varints unless noted):
//   head rel tail k union_size n_nodes nodes[n] (d_h d_t)[n]
//   n_edges (src dst rel)[n_edges] crc32(u32 LE, over the preceding bytes)
std::string encode_subgraph_record(const Subgraph& sub);
Subgraph decode_subgraph_record(std::string_view bytes, std::uint64_t index);

// Append-only writer for an "IKGS1" store:
//   "IKGS1" | u64 count | u64 offset[count] | record[count]
// Offsets are absolute file positions. Records are staged in a side file and
// the final layout is produced by finish(); the destructor finishes a store
// that was not finished explicitly.
class SubgraphStoreWriter {
 public:
  explicit SubgraphStoreWriter(std::filesystem::path path);
  ~SubgraphStoreWriter();
  SubgraphStoreWriter(const SubgraphStoreWriter&) = delete;
  SubgraphStoreWriter& operator=(const SubgraphStoreWriter&) = delete;

  std::uint64_t write(const Subgraph& sub);
  void finish();

 private:
  std::filesystem::path path_;
  std::filesystem::path staging_;
  std::ofstream staged_;
  std::vector<std::uint64_t> rel_offsets_;
  std::uint64_t staged_bytes_ = 0;
  bool finished_ = false;
};

// Read-only view over a finished store, memory-mapped. Safe to share
// between threads.
class SubgraphStore {
 public:
  static SubgraphStore open(const std::filesystem::path& path);

  SubgraphStore(SubgraphStore&& other) noexcept;
  SubgraphStore& operator=(SubgraphStore&& other) noexcept;
  SubgraphStore(const SubgraphStore&) = delete;
  SubgraphStore& operator=(const SubgraphStore&) = delete;
  ~SubgraphStore();

  std::uint64_t size() const { return count_; }
  // kIndexOutOfRange past the end, kCorruptRecord on checksum mismatch.
  Subgraph read(std::uint64_t index) const;
  std::string_view raw_bytes() const { return {data_, length_}; }

 private:
  SubgraphStore() = default;
  std::uint64_t offset(std::uint64_t index) const;

  const char* data_ = nullptr;
  std::size_t length_ = 0;
  std::uint64_t count_ = 0;
};

void write_store(const std::filesystem::path& path, const std::vector<Subgraph>& subgraphs);

struct CorpusStats {
  std::uint64_t count = 0;
  std::uint64_t max_nodes = 0;
  double mean_nodes = 0.0;
  std::uint64_t max_edges = 0;
  double mean_edges = 0.0;
  // Mean over subgraphs of 1 - |kept nodes| / |k-hop union|.
  double pruning_ratio = 0.0;
  // Subgraphs without any edge.
  std::uint64_t empty_count = 0;
};

CorpusStats collect_stats(const SubgraphStore& store);  // kEmptyStore if empty
nlohmann::json to_json(const CorpusStats& stats);

}  // namespace indkg
