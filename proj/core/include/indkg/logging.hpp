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

#include <cstddef>
#include <string_view>

namespace indkg::log {

enum class Level { kError = 0, kInfo = 1, kDebug = 2 };

// Reads INDKG_LOG={error,info,debug}; unset or unrecognized means info.
void init_from_env();
void set_level(Level level);

void error(std::string_view msg);
void warn(std::string_view msg);
void info(std::string_view msg);
void debug(std::string_view msg);

// Monotone count of warn() calls since process start. Tests use it to check
// that a code path emitted its warning.
std::size_t warning_count();

}  // namespace indkg::log
