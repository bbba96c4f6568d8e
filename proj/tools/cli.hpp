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

#include <ostream>
#include <span>
#include <string>

namespace indkg::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;  // bad config, flags, inputs or missing artifacts
inline constexpr int kExitRuntime = 2;     // everything else

// Artifact names inside output_dir.
inline constexpr const char* kDatasetFile = "dataset.ikgd";
inline constexpr const char* kModelFile = "model.ikgm";
inline constexpr const char* kMetricsFile = "metrics.jsonl";
inline constexpr const char* kReportFile = "report.json";
inline constexpr const char* kStatsFile = "stats.json";

// Runs `indkg <args...>` (args exclude the program name). Results go to
// `out`; one-line diagnostics go to `err`.
int execute(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace indkg::cli
