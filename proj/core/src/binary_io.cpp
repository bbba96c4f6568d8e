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

#include "indkg/binary_io.hpp"

#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "indkg/error.hpp"

namespace indkg::io {

static_assert(std::endian::native == std::endian::little,
              "on-disk formats assume a little-endian host");

void ByteWriter::put_u32(std::uint32_t v) {
  char b[4];
  std::memcpy(b, &v, 4);
  buf_.append(b, 4);
}

void ByteWriter::put_u64(std::uint64_t v) {
  char b[8];
  std::memcpy(b, &v, 8);
  buf_.append(b, 8);
}

void ByteWriter::put_f64(double v) { put_u64(std::bit_cast<std::uint64_t>(v)); }

void ByteWriter::put_varint(std::uint64_t v) {
  while (v >= 0x80) {
    put_u8(static_cast<std::uint8_t>(v | 0x80));
    v >>= 7;
  }
  put_u8(static_cast<std::uint8_t>(v));
}

void ByteWriter::put_string(std::string_view s) {
  put_varint(s.size());
  buf_.append(s);
}

void ByteReader::need(std::size_t n) const {
  if (n > remaining()) {
    fail(ErrorCode::kTruncatedFile, "needed " + std::to_string(n) + " bytes at offset " +
                                        std::to_string(pos_) + ", " +
                                        std::to_string(remaining()) + " left");
  }
}

std::uint8_t ByteReader::get_u8() {
  need(1);
  return static_cast<std::uint8_t>(bytes_[pos_++]);
}

std::uint32_t ByteReader::get_u32() {
  need(4);
  std::uint32_t v;
  std::memcpy(&v, bytes_.data() + pos_, 4);
  pos_ += 4;
  return v;
}

std::uint64_t ByteReader::get_u64() {
  need(8);
  std::uint64_t v;
  std::memcpy(&v, bytes_.data() + pos_, 8);
  pos_ += 8;
  return v;
}

double ByteReader::get_f64() { return std::bit_cast<double>(get_u64()); }

std::uint64_t ByteReader::get_varint() {
  std::uint64_t v = 0;
  for (int shift = 0; shift < 64; shift += 7) {
    const std::uint8_t b = get_u8();
    v |= static_cast<std::uint64_t>(b & 0x7F) << shift;
    if ((b & 0x80) == 0) return v;
  }
  fail(ErrorCode::kCorruptRecord, "varint longer than 10 bytes");
}

std::uint32_t ByteReader::get_varint32() {
  const std::uint64_t v = get_varint();
  if (v > 0xFFFFFFFFULL) fail(ErrorCode::kCorruptRecord, "varint exceeds 32 bits");
  return static_cast<std::uint32_t>(v);
}

std::string ByteReader::get_string() {
  const std::uint64_t n = get_varint();
  return std::string(get_raw(static_cast<std::size_t>(n)));
}

std::string_view ByteReader::get_raw(std::size_t n) {
  need(n);
  std::string_view out = bytes_.substr(pos_, n);
  pos_ += n;
  return out;
}

void put_magic(ByteWriter& w, std::string_view tag, char version) {
  w.put_raw(tag);
  w.put_u8(static_cast<std::uint8_t>(version));
}

void expect_magic(ByteReader& r, std::string_view tag, char version) {
  if (r.remaining() < tag.size() + 1) {
    fail(ErrorCode::kBadMagic, "file shorter than magic");
  }
  const std::string_view got = r.get_raw(tag.size());
  if (got != tag) fail(ErrorCode::kBadMagic, "expected magic " + std::string(tag));
  const char v = static_cast<char>(r.get_u8());
  if (v != version) {
    fail(ErrorCode::kVersionMismatch, std::string(tag) + " version '" + std::string(1, v) +
                                          "', expected '" + std::string(1, version) + "'");
  }
}

std::uint32_t crc32(std::string_view bytes) {
  uLong c = ::crc32(0L, Z_NULL, 0);
  c = ::crc32(c, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size()));
  return static_cast<std::uint32_t>(c);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kMissingFile, path.string());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::kIoError, "cannot open " + tmp.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) fail(ErrorCode::kIoError, "short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace indkg::io
