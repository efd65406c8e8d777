// Copyright 2026 The erkit Authors.
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

#include "erkit/error.h"

namespace erkit {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kDuplicateName: return "DuplicateName";
    case ErrorCode::kEmptyName: return "EmptyName";
    case ErrorCode::kProviderError: return "ProviderError";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kMissingVerdict: return "MissingVerdict";
    case ErrorCode::kMissingCorrection: return "MissingCorrection";
    case ErrorCode::kEmptyRationale: return "EmptyRationale";
    case ErrorCode::kTooFewPairs: return "TooFewPairs";
    case ErrorCode::kForbiddenQuestion: return "ForbiddenQuestion";
    case ErrorCode::kEmptyField: return "EmptyField";
    case ErrorCode::kRecordRejected: return "RecordRejected";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kManifestMismatch: return "ManifestMismatch";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kInvalidEpsilon: return "InvalidEpsilon";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kTokenizerRoundTripFailure: return "TokenizerRoundTripFailure";
    case ErrorCode::kMissingTrie: return "MissingTrie";
    case ErrorCode::kMissingVocab: return "MissingVocab";
    case ErrorCode::kZeroBeam: return "ZeroBeam";
    case ErrorCode::kBadTrieFile: return "BadTrieFile";
    case ErrorCode::kNegativeInput: return "NegativeInput";
    case ErrorCode::kDuplicateQueryId: return "DuplicateQueryId";
    case ErrorCode::kUnmappedLabel: return "UnmappedLabel";
    case ErrorCode::kUnresolvedEntity: return "UnresolvedEntity";
    case ErrorCode::kEmptyMemory: return "EmptyMemory";
    case ErrorCode::kEmptySplit: return "EmptySplit";
    case ErrorCode::kConfigMismatch: return "ConfigMismatch";
  }
  return "Unknown";
}

}  // namespace erkit
