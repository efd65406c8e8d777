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

#include "erkit/llm_refinement.h"

#include <algorithm>
#include <cctype>

#include "erkit/error.h"
#include "erkit/io.h"

namespace erkit {
namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string_view TrimLeading(std::string_view s, std::string_view chars) {
  const auto first = s.find_first_not_of(chars);
  return first == std::string_view::npos ? std::string_view{} : s.substr(first);
}

bool StartsWithWordCaseless(std::string_view text, std::string_view word) {
  if (text.size() < word.size()) return false;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (std::toupper(static_cast<unsigned char>(text[i])) != word[i]) return false;
  }
  return text.size() == word.size() ||
         !std::isalnum(static_cast<unsigned char>(text[word.size()]));
}

int CountSentences(std::string_view text) {
  int count = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c != '.' && c != '!' && c != '?') continue;
    if (i + 1 == text.size() || std::isspace(static_cast<unsigned char>(text[i + 1]))) ++count;
  }
  // Trailing text without terminal punctuation is still a sentence.
  const std::string_view t = Trim(text);
  if (!t.empty() && t.back() != '.' && t.back() != '!' && t.back() != '?') ++count;
  return count;
}

// Finds "Q:" or "A:" at `from` or later when it starts the text or follows
// whitespace.
std::size_t FindMarker(std::string_view text, char letter, std::size_t from) {
  const char marker[3] = {letter, ':', '\0'};
  for (std::size_t pos = text.find(marker, from); pos != std::string_view::npos;
       pos = text.find(marker, pos + 1)) {
    if (pos == 0 || std::isspace(static_cast<unsigned char>(text[pos - 1]))) return pos;
  }
  return std::string_view::npos;
}

std::string WithoutQuestionMarks(std::string s) {
  while (!s.empty() && (s.back() == '?' || s.back() == ' ')) s.pop_back();
  return s;
}

}  // namespace

std::string_view VerdictName(Verdict v) {
  return v == Verdict::kValidated ? "validated" : "corrected";
}

VerificationOutcome ParseVerificationResponse(std::string_view raw,
                                              std::string_view candidate_name) {
  std::string_view text = TrimLeading(Trim(raw), "'\"*` ");
  VerificationOutcome outcome;
  std::string_view rest;
  if (StartsWithWordCaseless(text, "YES")) {
    outcome.verdict = Verdict::kValidated;
    outcome.entity_name = std::string(candidate_name);
    rest = text.substr(3);
  } else if (StartsWithWordCaseless(text, "NO")) {
    outcome.verdict = Verdict::kCorrected;
    rest = text.substr(2);
  } else {
    throw Error(ErrorCode::kMissingVerdict, "response does not start with YES or NO");
  }
  constexpr std::string_view kAfterVerdict = " \t\r\n.,:;!-'\"*`";

  if (outcome.verdict == Verdict::kCorrected) {
    const std::size_t open = rest.find('@');
    const std::size_t close =
        open == std::string_view::npos ? std::string_view::npos : rest.find('@', open + 1);
    if (close == std::string_view::npos) {
      throw Error(ErrorCode::kMissingCorrection, "NO verdict without an @...@ span");
    }
    outcome.entity_name = NormalizeName(rest.substr(open + 1, close - open - 1));
    if (outcome.entity_name.empty()) {
      throw Error(ErrorCode::kMissingCorrection, "empty @...@ span");
    }
    rest = rest.substr(close + 1);
  }

  outcome.rationale = std::string(Trim(TrimLeading(rest, kAfterVerdict)));
  if (outcome.rationale.empty()) throw Error(ErrorCode::kEmptyRationale, "no rationale text");
  if (CountSentences(outcome.rationale) > 2) {
    outcome.warnings.push_back("rationale exceeds two sentences");
  }
  return outcome;
}

std::array<QAPair, kQaPairsPerRecord> ParseQaResponse(std::string_view raw) {
  std::vector<QAPair> pairs;
  std::size_t q = FindMarker(raw, 'Q', 0);
  while (q != std::string_view::npos) {
    const std::size_t q_body = q + 2;
    const std::size_t a = FindMarker(raw, 'A', q_body);
    const std::size_t next_q = FindMarker(raw, 'Q', q_body);
    if (a == std::string_view::npos || (next_q != std::string_view::npos && next_q < a)) {
      // Question with no answer before the next question.
      const std::size_t end = next_q == std::string_view::npos ? raw.size() : next_q;
      pairs.push_back(QAPair{std::string(Trim(raw.substr(q_body, end - q_body))), ""});
      q = next_q;
      continue;
    }
    const std::size_t a_body = a + 2;
    const std::size_t after = FindMarker(raw, 'Q', a_body);
    const std::size_t end = after == std::string_view::npos ? raw.size() : after;
    pairs.push_back(QAPair{std::string(Trim(raw.substr(q_body, a - q_body))),
                           std::string(Trim(raw.substr(a_body, end - a_body)))});
    q = after;
  }

  if (pairs.size() < kQaPairsPerRecord) {
    throw Error(ErrorCode::kTooFewPairs, "found " + std::to_string(pairs.size()) + " pairs",
                static_cast<std::int64_t>(pairs.size()));
  }
  static const std::string kForbidden = WithoutQuestionMarks(NormalizeName(kForbiddenQuestion));
  std::array<QAPair, kQaPairsPerRecord> out;
  for (std::size_t i = 0; i < kQaPairsPerRecord; ++i) {
    QAPair& p = pairs[i];
    if (p.question.empty() || p.answer.empty()) {
      throw Error(ErrorCode::kEmptyField, "pair " + std::to_string(i),
                  static_cast<std::int64_t>(i));
    }
    if (WithoutQuestionMarks(NormalizeName(p.question)) == kForbidden) {
      throw Error(ErrorCode::kForbiddenQuestion, "pair " + std::to_string(i),
                  static_cast<std::int64_t>(i));
    }
    if (p.question.back() != '?') p.question.push_back('?');
    out[i] = std::move(p);
  }
  return out;
}

namespace {

struct StageAttempt {
  bool ok = false;
  std::string raw;
  std::string reason;
  bool provider_failure = false;
};

// Calls the provider up to 1 + retries times until `parse` accepts the
// response text.
template <typename Parse>
StageAttempt RunStage(LlmProvider& provider, const ProviderRequest& request, int retries,
                      int& calls, Parse&& parse) {
  StageAttempt attempt;
  for (int i = 0; i <= retries; ++i) {
    ++calls;
    attempt.provider_failure = false;
    try {
      ProviderResponse response = provider.Complete(request);
      attempt.raw = response.text;
      if (response.status < 200 || response.status >= 300) {
        attempt.provider_failure = true;
        attempt.reason = "provider status " + std::to_string(response.status);
        continue;
      }
    } catch (const std::exception& e) {
      attempt.provider_failure = true;
      attempt.raw.clear();
      attempt.reason = std::string("provider error: ") + e.what();
      continue;
    }
    try {
      parse(attempt.raw);
      attempt.ok = true;
      return attempt;
    } catch (const Error& e) {
      attempt.reason = e.what();
    }
  }
  return attempt;
}

}  // namespace

RefineResult RefineRecord(LlmProvider& provider, const CandidateAssignment& assignment,
                          const EntityVocabulary& vocab, const RefineConfig& config,
                          std::optional<std::string_view> caption_proxy) {
  const EntityRecord& candidate = vocab.record(assignment.candidate_entity_id);
  RefineResult result;

  ProviderRequest request;
  if (!caption_proxy && !assignment.image_ref.empty()) request.image_ref = assignment.image_ref;

  auto reject = [&](std::string stage, StageAttempt&& attempt) {
    result.rejection = Rejection{assignment.image_id, std::move(stage), std::move(attempt.reason),
                                 std::move(attempt.raw), attempt.provider_failure};
    return result;
  };

  request.prompt = RenderVerificationPrompt(candidate.canonical_name, candidate.summary,
                                            assignment.caption, caption_proxy);
  VerificationOutcome outcome;
  StageAttempt verify = RunStage(provider, request, config.retries, result.provider_calls,
                                 [&](const std::string& raw) {
                                   outcome = ParseVerificationResponse(raw, candidate.canonical_name);
                                 });
  if (!verify.ok) return reject("verify", std::move(verify));

  request.prompt = RenderQaPrompt(outcome.entity_name, outcome.rationale, caption_proxy);
  std::array<QAPair, kQaPairsPerRecord> qa;
  StageAttempt qa_stage = RunStage(provider, request, config.retries, result.provider_calls,
                                   [&](const std::string& raw) { qa = ParseQaResponse(raw); });
  if (!qa_stage.ok) return reject("qa", std::move(qa_stage));

  result.record = RefinedRecord{assignment.image_id, assignment.caption,
                                assignment.candidate_entity_id, std::move(outcome), std::move(qa)};
  return result;
}

double CorrectionRate(std::span<const RefinedRecord> records) {
  if (records.empty()) throw Error(ErrorCode::kEmptyInput, "no records");
  const auto corrected = std::count_if(records.begin(), records.end(), [](const auto& r) {
    return r.outcome.verdict == Verdict::kCorrected;
  });
  return static_cast<double>(corrected) / static_cast<double>(records.size());
}

nlohmann::ordered_json RecordToJson(const RefinedRecord& record, const EntityVocabulary& vocab) {
  nlohmann::ordered_json j;
  j["image_id"] = record.image_id;
  j["original_caption"] = record.original_caption;
  j["candidate_entity"] = vocab.name(record.candidate_entity_id);
  j["verdict"] = VerdictName(record.outcome.verdict);
  j["entity"] = record.outcome.entity_name;
  j["rationale"] = record.outcome.rationale;
  nlohmann::ordered_json qa = nlohmann::ordered_json::array();
  for (const auto& p : record.qa_pairs) {
    qa.push_back(nlohmann::ordered_json{{"question", p.question}, {"answer", p.answer}});
  }
  j["qa"] = std::move(qa);
  if (!record.outcome.warnings.empty()) j["warnings"] = record.outcome.warnings;
  return j;
}

RefinedRecord RecordFromJson(const nlohmann::ordered_json& j, const EntityVocabulary& vocab) {
  try {
    RefinedRecord r;
    r.image_id = j.at("image_id").get<std::string>();
    r.original_caption = j.at("original_caption").get<std::string>();
    const auto candidate = j.at("candidate_entity").get<std::string>();
    auto id = vocab.Lookup(candidate);
    if (!id) throw Error(ErrorCode::kUnresolvedEntity, candidate);
    r.candidate_entity_id = *id;
    const auto verdict = j.at("verdict").get<std::string>();
    if (verdict == "validated") {
      r.outcome.verdict = Verdict::kValidated;
    } else if (verdict == "corrected") {
      r.outcome.verdict = Verdict::kCorrected;
    } else {
      throw Error(ErrorCode::kParseError, "unknown verdict " + verdict);
    }
    r.outcome.entity_name = j.at("entity").get<std::string>();
    r.outcome.rationale = j.at("rationale").get<std::string>();
    if (auto it = j.find("warnings"); it != j.end()) {
      r.outcome.warnings = it->get<std::vector<std::string>>();
    }
    const auto& qa = j.at("qa");
    if (!qa.is_array() || qa.size() != kQaPairsPerRecord) {
      throw Error(ErrorCode::kParseError, "record must have exactly 3 QA pairs");
    }
    for (std::size_t i = 0; i < kQaPairsPerRecord; ++i) {
      r.qa_pairs[i] = QAPair{qa[i].at("question").get<std::string>(),
                             qa[i].at("answer").get<std::string>()};
      if (r.qa_pairs[i].question.empty() || r.qa_pairs[i].answer.empty()) {
        throw Error(ErrorCode::kEmptyField, "pair " + std::to_string(i),
                    static_cast<std::int64_t>(i));
      }
    }
    if (r.outcome.entity_name.empty() || r.outcome.rationale.empty()) {
      throw Error(ErrorCode::kParseError, "record " + r.image_id + " has empty outcome fields");
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("record: ") + e.what());
  }
}

nlohmann::ordered_json RejectionToJson(const Rejection& rejection) {
  nlohmann::ordered_json j;
  j["image_id"] = rejection.image_id;
  j["stage"] = rejection.stage;
  j["reason"] = rejection.reason;
  j["raw_response"] = rejection.raw_response;
  return j;
}

// ---------------------------------------------------------------------------
// ScriptedProvider

namespace {

std::string ShaKey(std::string_view sha) { return "sha:" + std::string(sha); }
std::string RefKey(std::string_view ref, std::string_view stage) {
  return "ref:" + std::string(stage) + ":" + std::string(ref);
}
std::string DefaultKey(std::string_view stage) { return "default:" + std::string(stage); }

}  // namespace

ScriptedProvider::ScriptedProvider(std::vector<Entry> entries) {
  for (auto& e : entries) {
    if (e.responses.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "scripted entry without responses");
    }
    std::string key;
    if (e.prompt_sha256) {
      key = ShaKey(*e.prompt_sha256);
    } else if (e.image_ref) {
      key = RefKey(*e.image_ref, e.stage.value_or(""));
    } else {
      key = DefaultKey(e.stage.value_or(""));
    }
    auto& list = by_key_[key];
    list.insert(list.end(), e.responses.begin(), e.responses.end());
  }
}

std::unique_ptr<ScriptedProvider> ScriptedProvider::LoadDirectory(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::kIoError, "not a directory: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& item : std::filesystem::directory_iterator(dir)) {
    if (item.is_regular_file() && item.path().extension() == ".jsonl") files.push_back(item.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<Entry> entries;
  for (const auto& file : files) {
    for (const auto& j : ReadJsonLines(file)) {
      Entry e;
      if (auto it = j.find("prompt_sha256"); it != j.end()) e.prompt_sha256 = it->get<std::string>();
      if (auto it = j.find("image_ref"); it != j.end()) e.image_ref = it->get<std::string>();
      if (auto it = j.find("stage"); it != j.end()) e.stage = it->get<std::string>();
      auto it = j.find("responses");
      if (it == j.end() || !it->is_array()) {
        throw Error(ErrorCode::kParseError, file.string() + ": entry without \"responses\"");
      }
      e.responses = it->get<std::vector<std::string>>();
      entries.push_back(std::move(e));
    }
  }
  return std::make_unique<ScriptedProvider>(std::move(entries));
}

ProviderResponse ScriptedProvider::Complete(const ProviderRequest& request) {
  const std::string_view stage = PromptStage(request.prompt);
  std::vector<std::string> keys = {ShaKey(Sha256Hex(request.prompt))};
  if (request.image_ref) keys.push_back(RefKey(*request.image_ref, stage));
  keys.push_back(DefaultKey(stage));

  std::lock_guard<std::mutex> lock(mu_);
  log_.push_back(request);
  for (const auto& key : keys) {
    auto it = by_key_.find(key);
    if (it == by_key_.end()) continue;
    std::size_t& cursor = cursor_[key];
    const std::string& text = it->second[std::min(cursor, it->second.size() - 1)];
    ++cursor;
    return ProviderResponse{text, 200};
  }
  throw Error(ErrorCode::kProviderError, "no scripted response for " + std::string(stage) +
                                             " request" +
                                             (request.image_ref ? " on " + *request.image_ref : ""));
}

std::vector<ProviderRequest> ScriptedProvider::requests() const {
  std::lock_guard<std::mutex> lock(mu_);
  return log_;
}

}  // namespace erkit
