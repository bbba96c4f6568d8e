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
#include <span>
#include <string>
#include <string_view>

namespace indkg::io {

// Little-endian byte sink used by every on-disk format in the project.
// Unsigned integers that are mostly small go through LEB128 varints.
class ByteWriter {
 public:
  void put_u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
  void put_u32(std::uint32_t v);
  void put_u64(std::uint64_t v);
  void put_f64(double v);
  void put_varint(std::uint64_t v);
  void put_string(std::string_view s);  // varint length + bytes
  void put_raw(std::string_view bytes) { buf_.append(bytes); }

  std::size_t size() const { return buf_.size(); }
  const std::string& bytes() const& { return buf_; }
  std::string take() && { return std::move(buf_); }
  void clear() { buf_.clear(); }

 private:
  std::string buf_;
};

// Bounds-checked reader; running past the end raises kTruncatedFile.
class ByteReader {
 public:
  explicit ByteReader(std::string_view bytes) : bytes_(bytes) {}

  std::uint8_t get_u8();
  std::uint32_t get_u32();
  std::uint64_t get_u64();
  double get_f64();
  std::uint64_t get_varint();
  std::uint32_t get_varint32();
  std::string get_string();
  std::string_view get_raw(std::size_t n);

  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }
  bool at_end() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n) const;

  std::string_view bytes_;
  std::size_t pos_ = 0;
};

// Magic is a 4-byte family tag followed by a single version character,
// e.g. "IKGD" + '1'. A matching tag with a different version is reported as
// kVersionMismatch, anything else as kBadMagic.
void put_magic(ByteWriter& w, std::string_view tag, char version);
void expect_magic(ByteReader& r, std::string_view tag, char version);

std::uint32_t crc32(std::string_view bytes);

std::string read_file(const std::filesystem::path& path);
// Writes through a temporary sibling and renames, so readers never observe a
// half-written file.
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace indkg::io
