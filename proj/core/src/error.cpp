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

#include "indkg/error.hpp"

namespace indkg {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMissingFile: return "MissingFile";
    case ErrorCode::kMalformedLine: return "MalformedLine";
    case ErrorCode::kUnknownRelation: return "UnknownRelation";
    case ErrorCode::kUnknownEntity: return "UnknownEntity";
    case ErrorCode::kEntityOverlap: return "EntityOverlap";
    case ErrorCode::kLeakedTriple: return "LeakedTriple";
    case ErrorCode::kIdOutOfBounds: return "IdOutOfBounds";
    case ErrorCode::kBadMagic: return "BadMagic";
    case ErrorCode::kTruncatedFile: return "TruncatedFile";
    case ErrorCode::kVersionMismatch: return "VersionMismatch";
    case ErrorCode::kCorruptRecord: return "CorruptRecord";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kEmptyStore: return "EmptyStore";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kExhaustedRetries: return "ExhaustedRetries";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kUnknownCompositionOp: return "UnknownCompositionOp";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kNonFiniteGradient: return "NonFiniteGradient";
    case ErrorCode::kNonFiniteUpdate: return "NonFiniteUpdate";
    case ErrorCode::kNonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::kNonFiniteValue: return "NonFiniteValue";
    case ErrorCode::kIsolatedEntity: return "IsolatedEntity";
    case ErrorCode::kSingleClass: return "SingleClass";
    case ErrorCode::kEmptyScores: return "EmptyScores";
    case ErrorCode::kUnknownKey: return "UnknownKey";
    case ErrorCode::kTypeError: return "TypeError";
    case ErrorCode::kMissingRequired: return "MissingRequired";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + detail),
      code_(code),
      detail_(detail) {}

void fail(ErrorCode code, const std::string& detail) { throw Error(code, detail); }

}  // namespace indkg
