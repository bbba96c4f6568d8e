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
#include <cstdint>
#include <functional>

namespace indkg {

using EntityId = std::uint32_t;
using RelationId = std::uint32_t;

struct Triple {
  EntityId head = 0;
  RelationId rel = 0;
  EntityId tail = 0;

  friend auto operator<=>(const Triple&, const Triple&) = default;
};

enum class Direction : std::uint8_t { kForward = 0, kInverse = 1 };

}  // namespace indkg

template <>
struct std::hash<indkg::Triple> {
  std::size_t operator()(const indkg::Triple& t) const noexcept {
    std::uint64_t x = (static_cast<std::uint64_t>(t.head) << 32) ^ t.tail;
    x ^= static_cast<std::uint64_t>(t.rel) * 0x9E3779B97F4A7C15ULL;
    x ^= x >> 29;
    return static_cast<std::size_t>(x * 0xBF58476D1CE4E5B9ULL);
  }
};
