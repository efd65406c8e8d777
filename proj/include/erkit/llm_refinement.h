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

#ifndef ERKIT_LLM_REFINEMENT_H_
#define ERKIT_LLM_REFINEMENT_H_

// Verification/correction and QA generation with a multimodal (or text-only)
// language model: prompt rendering, response parsing and the per-record
// refinement loop with retries.

#include <array>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "erkit/embedding.h"
#include "erkit/entity_kb.h"
#include "json.hpp"

namespace erkit {

enum class Verdict { kValidated, kCorrected };

std::string_view VerdictName(Verdict v);

struct VerificationOutcome {
  Verdict verdict = Verdict::kValidated;
  std::string entity_name;
  std::string rationale;
  // Non-fatal findings, e.g. a rationale longer than two sentences.
  std::vector<std::string> warnings;
};

struct QAPair {
  std::string question;
  std::string answer;

  bool operator==(const QAPair&) const = default;
};

inline constexpr std::size_t kQaPairsPerRecord = 3;
inline constexpr std::string_view kForbiddenQuestion = "What is the main object in the image?";

struct RefinedRecord {
  std::string image_id;
  std::string original_caption;
  EntityId candidate_entity_id = 0;
  VerificationOutcome outcome;
  std::array<QAPair, kQaPairsPerRecord> qa_pairs;
};

std::string RenderVerificationPrompt(std::string_view candidate_name, std::string_view summary,
                                     std::string_view caption,
                                     std::optional<std::string_view> caption_proxy = std::nullopt);

std::string RenderQaPrompt(std::string_view entity_name, std::string_view rationale,
                           std::optional<std::string_view> caption_proxy = std::nullopt);

// YES -> validated candidate; NO -> corrected entity taken from the first
// '@...@' span (normalized), rationale from the text after it.
// Throws kMissingVerdict, kMissingCorrection or kEmptyRationale.
VerificationOutcome ParseVerificationResponse(std::string_view raw,
                                              std::string_view candidate_name);

// First three "Q:... A:..." pairs. Throws kTooFewPairs (detail = pairs found),
// kEmptyField or kForbiddenQuestion (detail = pair index). A question that
// does not end in '?' gets one appended.
std::array<QAPair, kQaPairsPerRecord> ParseQaResponse(std::string_view raw);

struct ProviderRequest {
  std::string prompt;
  std::optional<std::string> image_ref;
};

struct ProviderResponse {
  std::string text;
  int status = 200;
};

// Text-in/text-out model call. Implementations may throw on transport
// failure; they must be safe to call from several threads at once.
class LlmProvider {
 public:
  virtual ~LlmProvider() = default;
  virtual ProviderResponse Complete(const ProviderRequest& request) = 0;
};

// Fixture-driven provider for tests and offline runs.
//
// Each entry is keyed by one of: the SHA-256 of the exact prompt, an
// (image_ref, stage) pair, or a per-stage default. Lookup tries them in that
// order. Repeated requests on one key walk its response list; the last
// response repeats once the list is exhausted.
class ScriptedProvider final : public LlmProvider {
 public:
  struct Entry {
    std::optional<std::string> prompt_sha256;
    std::optional<std::string> image_ref;
    std::optional<std::string> stage;  // "verify" or "qa"
    std::vector<std::string> responses;
  };

  explicit ScriptedProvider(std::vector<Entry> entries);
  // Reads every *.jsonl file in `dir` in name order; one entry per line.
  static std::unique_ptr<ScriptedProvider> LoadDirectory(const std::filesystem::path& dir);

  ProviderResponse Complete(const ProviderRequest& request) override;

  std::vector<ProviderRequest> requests() const;

 private:
  std::map<std::string, std::vector<std::string>> by_key_;
  std::map<std::string, std::size_t> cursor_;
  std::vector<ProviderRequest> log_;
  mutable std::mutex mu_;
};

// "verify" for the verification prompt, "qa" for the QA prompt, "" otherwise.
std::string_view PromptStage(std::string_view prompt);

// POSTs {"prompt", "image_ref"} as JSON and reads {"text"} back. The bearer
// token is sent when non-empty.
class HttpProvider final : public LlmProvider {
 public:
  HttpProvider(std::string url, std::string token, int timeout_seconds = 60);
  // Reads PROVIDER_URL and PROVIDER_TOKEN. Throws kInvalidArgument if the URL
  // is unset.
  static HttpProvider FromEnvironment(int timeout_seconds = 60);

  ProviderResponse Complete(const ProviderRequest& request) override;

 private:
  std::string base_;
  std::string path_;
  std::string token_;
  int timeout_seconds_;
};

struct RefineConfig {
  // Extra attempts per stage after the first one fails.
  int retries = 2;
};

struct Rejection {
  std::string image_id;
  std::string stage;  // "verify" or "qa"
  std::string reason;
  std::string raw_response;
  // True when the last failure was a transport/provider error rather than a
  // malformed response.
  bool provider_failure = false;
};

struct RefineResult {
  std::optional<RefinedRecord> record;
  std::optional<Rejection> rejection;
  int provider_calls = 0;
};

// Verification prompt -> parse -> QA prompt -> parse. With `caption_proxy`
// the prompts carry the proxy description and no image reference is sent.
RefineResult RefineRecord(LlmProvider& provider, const CandidateAssignment& assignment,
                          const EntityVocabulary& vocab, const RefineConfig& config,
                          std::optional<std::string_view> caption_proxy = std::nullopt);

// Fraction of records whose verdict is Corrected. Throws kEmptyInput.
double CorrectionRate(std::span<const RefinedRecord> records);

nlohmann::ordered_json RecordToJson(const RefinedRecord& record, const EntityVocabulary& vocab);
RefinedRecord RecordFromJson(const nlohmann::ordered_json& j, const EntityVocabulary& vocab);
nlohmann::ordered_json RejectionToJson(const Rejection& rejection);

}  // namespace erkit

#endif  // ERKIT_LLM_REFINEMENT_H_
