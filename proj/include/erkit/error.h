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

#ifndef ERKIT_ERROR_H_
#define ERKIT_ERROR_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace erkit {

enum class ErrorCode {
  kInvalidArgument,
  kParseError,
  kIoError,
  // Entity vocabulary.
  kDuplicateName,
  kEmptyName,
  // Embeddings and matching.
  kProviderError,
  kDimensionMismatch,
  // LLM response parsing.
  kMissingVerdict,
  kMissingCorrection,
  kEmptyRationale,
  kTooFewPairs,
  kForbiddenQuestion,
  kEmptyField,
  kRecordRejected,
  kEmptyInput,
  // Dataset files.
  kManifestMismatch,
  // Objective.
  kIndexOutOfRange,
  kInvalidEpsilon,
  kLengthMismatch,
  // Decoding.
  kTokenizerRoundTripFailure,
  kMissingTrie,
  kMissingVocab,
  kZeroBeam,
  kBadTrieFile,
  // Evaluation.
  kNegativeInput,
  kDuplicateQueryId,
  kUnmappedLabel,
  kUnresolvedEntity,
  kEmptyMemory,
  kEmptySplit,
  // Pipeline.
  kConfigMismatch,
};

std::string_view ErrorCodeName(ErrorCode code);

// Exception type used across the library. `detail` carries the integer
// payload some errors have (pair count, pair index, row number).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::int64_t detail = -1)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code),
        detail_(detail) {}

  ErrorCode code() const { return code_; }
  std::int64_t detail() const { return detail_; }

 private:
  ErrorCode code_;
  std::int64_t detail_;
};

}  // namespace erkit

#endif  // ERKIT_ERROR_H_
