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

#include <stdexcept>
#include <string>
#include <string_view>

namespace indkg {

enum class ErrorCode {
  kMissingFile,
  kMalformedLine,
  kUnknownRelation,
  kUnknownEntity,
  kEntityOverlap,
  kLeakedTriple,
  kIdOutOfBounds,
  kBadMagic,
  kTruncatedFile,
  kVersionMismatch,
  kCorruptRecord,
  kIndexOutOfRange,
  kEmptyStore,
  kEmptyInput,
  kExhaustedRetries,
  kShapeMismatch,
  kUnknownCompositionOp,
  kLengthMismatch,
  kNonFiniteGradient,
  kNonFiniteUpdate,
  kNonFiniteLoss,
  kNonFiniteValue,
  kIsolatedEntity,
  kSingleClass,
  kEmptyScores,
  kUnknownKey,
  kTypeError,
  kMissingRequired,
  kInvalidArgument,
  kIoError,
};

std::string_view error_code_name(ErrorCode code);

// Every failure raised by the library carries a code so callers (and the CLI
// exit-code mapping) can branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& detail);

}  // namespace indkg
