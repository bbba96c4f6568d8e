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

#include "indkg/subgraph_store.hpp"

#include <fcntl.h>
#include <sys/mman.h>
#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <cstring>
#include <utility>

#include "indkg/binary_io.hpp"
#include "indkg/error.hpp"

namespace indkg {
namespace {

constexpr std::size_t kHeaderBytes = 5 + 8;

}  // namespace

std::string encode_subgraph_record(const Subgraph& sub) {
  io::ByteWriter w;
  w.put_varint(sub.target.head);
  w.put_varint(sub.target.rel);
  w.put_varint(sub.target.tail);
  w.put_varint(sub.k);
  w.put_varint(sub.union_size);
  w.put_varint(sub.nodes.size());
  for (EntityId e : sub.nodes) w.put_varint(e);
  for (const DistPair& d : sub.dist) {
    w.put_varint(d.to_head);
    w.put_varint(d.to_tail);
  }
  w.put_varint(sub.edges.size());
  for (const LocalEdge& e : sub.edges) {
    w.put_varint(e.src);
    w.put_varint(e.dst);
    w.put_varint(e.rel);
  }
  w.put_u32(io::crc32(w.bytes()));
  return std::move(w).take();
}

Subgraph decode_subgraph_record(std::string_view bytes, std::uint64_t index) {
  const auto corrupt = [index](const std::string& why) {
    fail(ErrorCode::kCorruptRecord, "record " + std::to_string(index) + ": " + why);
  };
  if (bytes.size() < 4) corrupt("shorter than its checksum");
  const std::string_view body = bytes.substr(0, bytes.size() - 4);
  std::uint32_t stored;
  std::memcpy(&stored, bytes.data() + body.size(), 4);
  if (stored != io::crc32(body)) corrupt("checksum mismatch");

  Subgraph sub;
  try {
    io::ByteReader r(body);
    sub.target.head = r.get_varint32();
    sub.target.rel = r.get_varint32();
    sub.target.tail = r.get_varint32();
    sub.k = r.get_varint32();
    sub.union_size = r.get_varint();
    const std::uint64_t n = r.get_varint();
    if (n > body.size()) corrupt("node count exceeds record");
    sub.nodes.resize(n);
    for (EntityId& e : sub.nodes) e = r.get_varint32();
    sub.dist.resize(n);
    for (DistPair& d : sub.dist) {
      d.to_head = r.get_varint32();
      d.to_tail = r.get_varint32();
    }
    const std::uint64_t m = r.get_varint();
    if (m > body.size()) corrupt("edge count exceeds record");
    sub.edges.resize(m);
    for (LocalEdge& e : sub.edges) {
      e.src = r.get_varint32();
      e.dst = r.get_varint32();
      e.rel = r.get_varint32();
      if (e.src >= n || e.dst >= n) corrupt("edge endpoint outside node list");
    }
    if (!r.at_end()) corrupt("trailing bytes");
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kCorruptRecord) throw;
    corrupt(e.what());
  }
  return sub;
}

SubgraphStoreWriter::SubgraphStoreWriter(std::filesystem::path path)
    : path_(std::move(path)), staging_(path_) {
  staging_ += ".records.tmp";
  staged_.open(staging_, std::ios::binary | std::ios::trunc);
  if (!staged_) fail(ErrorCode::kIoError, "cannot open " + staging_.string());
}

SubgraphStoreWriter::~SubgraphStoreWriter() {
  if (!finished_) {
    try {
      finish();
    } catch (...) {
      std::error_code ec;
      std::filesystem::remove(staging_, ec);
    }
  }
}

std::uint64_t SubgraphStoreWriter::write(const Subgraph& sub) {
  if (finished_) fail(ErrorCode::kInvalidArgument, "write to a finished store");
  const std::string rec = encode_subgraph_record(sub);
  rel_offsets_.push_back(staged_bytes_);
  staged_.write(rec.data(), static_cast<std::streamsize>(rec.size()));
  if (!staged_) fail(ErrorCode::kIoError, "short write to " + staging_.string());
  staged_bytes_ += rec.size();
  return rel_offsets_.size() - 1;
}

void SubgraphStoreWriter::finish() {
  if (finished_) return;
  finished_ = true;
  staged_.close();

  io::ByteWriter header;
  io::put_magic(header, "IKGS", '1');
  header.put_u64(rel_offsets_.size());
  const std::uint64_t base = kHeaderBytes + 8 * rel_offsets_.size();
  for (std::uint64_t off : rel_offsets_) header.put_u64(base + off);

  std::filesystem::path tmp = path_;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::kIoError, "cannot open " + tmp.string());
    out.write(header.bytes().data(), static_cast<std::streamsize>(header.size()));
    if (staged_bytes_ > 0) {
      // operator<< flags an empty source as a failed insertion.
      std::ifstream in(staging_, std::ios::binary);
      out << in.rdbuf();
    }
    if (!out) fail(ErrorCode::kIoError, "short write to " + tmp.string());
  }
  std::filesystem::remove(staging_);
  std::filesystem::rename(tmp, path_);
}

SubgraphStore SubgraphStore::open(const std::filesystem::path& path) {
  const int fd = ::open(path.c_str(), O_RDONLY);
  if (fd < 0) fail(ErrorCode::kMissingFile, path.string());
  struct stat st {};
  if (::fstat(fd, &st) != 0) {
    ::close(fd);
    fail(ErrorCode::kIoError, "cannot stat " + path.string());
  }
  SubgraphStore store;
  store.length_ = static_cast<std::size_t>(st.st_size);
  if (store.length_ > 0) {
    void* p = ::mmap(nullptr, store.length_, PROT_READ, MAP_PRIVATE, fd, 0);
    ::close(fd);
    if (p == MAP_FAILED) fail(ErrorCode::kIoError, "cannot map " + path.string());
    store.data_ = static_cast<const char*>(p);
  } else {
    ::close(fd);
  }

  io::ByteReader r(store.raw_bytes());
  io::expect_magic(r, "IKGS", '1');
  store.count_ = r.get_u64();
  if (store.count_ > r.remaining() / 8) {
    fail(ErrorCode::kTruncatedFile, "offset table exceeds file size");
  }
  std::uint64_t prev = kHeaderBytes + 8 * store.count_;
  for (std::uint64_t i = 0; i < store.count_; ++i) {
    const std::uint64_t off = store.offset(i);
    if (off < prev || off > store.length_) {
      fail(ErrorCode::kTruncatedFile, "offset " + std::to_string(i) + " out of order or range");
    }
    prev = off;
  }
  return store;
}

SubgraphStore::SubgraphStore(SubgraphStore&& other) noexcept
    : data_(std::exchange(other.data_, nullptr)),
      length_(std::exchange(other.length_, 0)),
      count_(std::exchange(other.count_, 0)) {}

SubgraphStore& SubgraphStore::operator=(SubgraphStore&& other) noexcept {
  if (this != &other) {
    if (data_) ::munmap(const_cast<char*>(data_), length_);
    data_ = std::exchange(other.data_, nullptr);
    length_ = std::exchange(other.length_, 0);
    count_ = std::exchange(other.count_, 0);
  }
  return *this;
}

SubgraphStore::~SubgraphStore() {
  if (data_) ::munmap(const_cast<char*>(data_), length_);
}

std::uint64_t SubgraphStore::offset(std::uint64_t index) const {
  std::uint64_t v;
  std::memcpy(&v, data_ + kHeaderBytes + 8 * index, 8);
  return v;
}

Subgraph SubgraphStore::read(std::uint64_t index) const {
  if (index >= count_) {
    fail(ErrorCode::kIndexOutOfRange,
         "record " + std::to_string(index) + " of " + std::to_string(count_));
  }
  const std::uint64_t begin = offset(index);
  const std::uint64_t end = index + 1 < count_ ? offset(index + 1) : length_;
  return decode_subgraph_record(std::string_view(data_ + begin, end - begin), index);
}

void write_store(const std::filesystem::path& path, const std::vector<Subgraph>& subgraphs) {
  SubgraphStoreWriter writer(path);
  for (const Subgraph& s : subgraphs) writer.write(s);
  writer.finish();
}

CorpusStats collect_stats(const SubgraphStore& store) {
  if (store.size() == 0) fail(ErrorCode::kEmptyStore, "no subgraphs to summarize");
  CorpusStats s;
  s.count = store.size();
  double nodes = 0, edges = 0, pruning = 0;
  for (std::uint64_t i = 0; i < store.size(); ++i) {
    const Subgraph sub = store.read(i);
    const std::uint64_t n = sub.nodes.size();
    const std::uint64_t m = sub.edges.size();
    s.max_nodes = std::max(s.max_nodes, n);
    s.max_edges = std::max(s.max_edges, m);
    nodes += static_cast<double>(n);
    edges += static_cast<double>(m);
    if (sub.union_size > 0) {
      pruning += 1.0 - static_cast<double>(n) / static_cast<double>(sub.union_size);
    }
    if (m == 0) ++s.empty_count;
  }
  const double count = static_cast<double>(s.count);
  s.mean_nodes = nodes / count;
  s.mean_edges = edges / count;
  s.pruning_ratio = pruning / count;
  return s;
}

nlohmann::json to_json(const CorpusStats& s) {
  return {{"count", s.count},           {"max_nodes", s.max_nodes},
          {"mean_nodes", s.mean_nodes}, {"max_edges", s.max_edges},
          {"mean_edges", s.mean_edges}, {"pruning_ratio", s.pruning_ratio},
          {"empty_count", s.empty_count}};
}

}  // namespace indkg
