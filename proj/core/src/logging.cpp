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

#include "indkg/logging.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <atomic>
#include <cstdlib>
#include <memory>
#include <string>

namespace indkg::log {
namespace {

std::atomic<std::size_t> g_warnings{0};

spdlog::logger& logger() {
  static std::shared_ptr<spdlog::logger> instance = [] {
    auto l = spdlog::stderr_color_mt("indkg");
    l->set_pattern("[%H:%M:%S.%e] [%^%l%$] %v");
    l->set_level(spdlog::level::info);
    return l;
  }();
  return *instance;
}

}  // namespace

void set_level(Level level) {
  switch (level) {
    case Level::kError: logger().set_level(spdlog::level::err); break;
    case Level::kInfo: logger().set_level(spdlog::level::info); break;
    case Level::kDebug: logger().set_level(spdlog::level::debug); break;
  }
}

void init_from_env() {
  const char* env = std::getenv("INDKG_LOG");
  const std::string v = env ? env : "";
  if (v == "error") {
    set_level(Level::kError);
  } else if (v == "debug") {
    set_level(Level::kDebug);
  } else {
    set_level(Level::kInfo);
  }
}

void error(std::string_view msg) { logger().error("{}", msg); }

void warn(std::string_view msg) {
  g_warnings.fetch_add(1, std::memory_order_relaxed);
  logger().warn("{}", msg);
}

void info(std::string_view msg) { logger().info("{}", msg); }
void debug(std::string_view msg) { logger().debug("{}", msg); }

std::size_t warning_count() { return g_warnings.load(std::memory_order_relaxed); }

}  // namespace indkg::log
