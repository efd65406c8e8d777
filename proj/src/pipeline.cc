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

#include "erkit/pipeline.h"

#include <deque>
#include <future>
#include <map>
#include <random>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "erkit/error.h"
#include "erkit/io.h"
#include "erkit/objective.h"
#include "erkit/trie.h"

namespace erkit {
namespace {

namespace fs = std::filesystem;

void EnsureDir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + dir.string() + ": " + ec.message());
}

template <typename T>
void ReadKey(const nlohmann::json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end()) {
    try {
      out = it->get<T>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kInvalidArgument, std::string("config key ") + key + ": " + e.what());
    }
  }
}

std::string GetString(const nlohmann::ordered_json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) {
    throw Error(ErrorCode::kParseError, std::string("missing string field \"") + key + "\"");
  }
  return it->get<std::string>();
}

// Reads {"<id_key>": ..., "embedding": [...]} lines into a matrix plus ids.
std::pair<EmbeddingMatrix, std::vector<std::string>> LoadEmbeddings(const fs::path& path,
                                                                    const char* id_key) {
  auto lines = ReadJsonLines(path);
  std::optional<EmbeddingMatrix> matrix;
  std::vector<std::string> ids;
  for (const auto& j : lines) {
    auto it = j.find("embedding");
    if (it == j.end() || !it->is_array()) {
      throw Error(ErrorCode::kParseError, path.string() + ": line without \"embedding\"");
    }
    auto values = it->get<std::vector<float>>();
    if (!matrix) matrix.emplace(values.size());
    matrix->Append(values);
    ids.push_back(j.contains(id_key) ? j.at(id_key).get<std::string>() : "");
  }
  return {matrix ? std::move(*matrix) : EmbeddingMatrix(0), std::move(ids)};
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration

PipelineConfig PipelineConfig::FromJson(const nlohmann::json& j, const fs::path& base_dir) {
  static const std::set<std::string> kKeys = {
      "provider",       "mock_fixtures", "provider_timeout_seconds", "embedder",
      "embedding_dim",  "match_k",       "retries",                  "max_in_flight",
      "leak_threshold", "entity_prompt", "rationale_prefix",         "shard_size",
      "decode_mode",    "beam_size",     "max_len",                  "label_smoothing",
      "seed"};
  if (!j.is_object()) throw Error(ErrorCode::kInvalidArgument, "config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!kKeys.contains(key)) throw Error(ErrorCode::kInvalidArgument, "unknown config key " + key);
  }
  PipelineConfig c;
  ReadKey(j, "provider", c.provider);
  ReadKey(j, "mock_fixtures", c.mock_fixtures);
  ReadKey(j, "provider_timeout_seconds", c.provider_timeout_seconds);
  ReadKey(j, "embedder", c.embedder);
  ReadKey(j, "embedding_dim", c.embedding_dim);
  ReadKey(j, "match_k", c.match_k);
  ReadKey(j, "retries", c.retries);
  ReadKey(j, "max_in_flight", c.max_in_flight);
  ReadKey(j, "leak_threshold", c.leak_threshold);
  ReadKey(j, "entity_prompt", c.prompts.entity_prompt);
  ReadKey(j, "rationale_prefix", c.prompts.rationale_prefix);
  ReadKey(j, "shard_size", c.shard_size);
  ReadKey(j, "decode_mode", c.decode_mode);
  ReadKey(j, "beam_size", c.beam_size);
  ReadKey(j, "max_len", c.max_len);
  ReadKey(j, "label_smoothing", c.label_smoothing);
  ReadKey(j, "seed", c.seed);
  c.base_dir = base_dir;
  c.Validate();
  return c;
}

PipelineConfig PipelineConfig::LoadFile(const fs::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ReadFile(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, path.string() + ": " + e.what());
  }
  return FromJson(j, path.parent_path());
}

nlohmann::json PipelineConfig::ToJson() const {
  nlohmann::json j;
  j["provider"] = provider;
  j["mock_fixtures"] = mock_fixtures;
  j["provider_timeout_seconds"] = provider_timeout_seconds;
  j["embedder"] = embedder;
  j["embedding_dim"] = embedding_dim;
  j["match_k"] = match_k;
  j["retries"] = retries;
  j["max_in_flight"] = max_in_flight;
  j["leak_threshold"] = leak_threshold;
  j["entity_prompt"] = prompts.entity_prompt;
  j["rationale_prefix"] = prompts.rationale_prefix;
  j["shard_size"] = shard_size;
  j["decode_mode"] = decode_mode;
  j["beam_size"] = beam_size;
  j["max_len"] = max_len;
  j["label_smoothing"] = label_smoothing;
  j["seed"] = seed;
  return j;
}

std::string PipelineConfig::Hash() const { return Sha256Hex(ToJson().dump()); }

void PipelineConfig::Validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kInvalidArgument, what); };
  if (provider != "mock" && provider != "http") fail("provider must be \"mock\" or \"http\"");
  if (provider_timeout_seconds < 1) fail("provider_timeout_seconds must be >= 1");
  if (embedder != "trigram") fail("embedder must be \"trigram\"");
  if (embedding_dim < 1 || embedding_dim > 65536) fail("embedding_dim must be in [1, 65536]");
  if (match_k < 1) fail("match_k must be >= 1");
  if (retries < 0 || retries > 10) fail("retries must be in [0, 10]");
  if (max_in_flight < 1 || max_in_flight > 256) fail("max_in_flight must be in [1, 256]");
  if (!(leak_threshold >= 0.0 && leak_threshold <= 1.0)) fail("leak_threshold must be in [0, 1]");
  if (shard_size < 1) fail("shard_size must be >= 1");
  ParseDecodeMode(decode_mode);
  if (beam_size < 1) fail("beam_size must be >= 1");
  if (max_len < 1 || max_len > 4096) fail("max_len must be in [1, 4096]");
  if (!(label_smoothing >= 0.0 && label_smoothing < 1.0)) fail("label_smoothing must be in [0, 1)");
  if (prompts.entity_prompt.empty() || prompts.rationale_prefix.empty()) {
    fail("task prompts must be non-empty");
  }
}

std::unique_ptr<LlmProvider> MakeProvider(const PipelineConfig& config) {
  if (config.provider == "http") {
    return std::make_unique<HttpProvider>(HttpProvider::FromEnvironment(config.provider_timeout_seconds));
  }
  if (config.mock_fixtures.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "mock provider needs \"mock_fixtures\"");
  }
  fs::path dir = config.mock_fixtures;
  if (dir.is_relative() && !config.base_dir.empty()) dir = config.base_dir / dir;
  return ScriptedProvider::LoadDirectory(dir);
}

std::unique_ptr<EmbeddingProvider> MakeEmbedder(const PipelineConfig& config) {
  return std::make_unique<TrigramEmbedder>(config.embedding_dim);
}

// ---------------------------------------------------------------------------
// match

MatchSummary RunMatch(const PipelineConfig& config, const fs::path& corpus_path,
                      const fs::path& vocab_path, const fs::path& out_dir) {
  const EntityVocabulary vocab = EntityVocabulary::LoadFile(vocab_path);
  const std::vector<CaptionedImage> corpus = LoadCorpus(corpus_path);
  EnsureDir(out_dir);
  MatchSummary summary;
  summary.images = corpus.size();
  summary.output = out_dir / "assignments.jsonl";
  std::string content;
  if (!corpus.empty()) {
    auto embedder = MakeEmbedder(config);
    for (const auto& a : BuildCandidateAssignments(vocab, corpus, *embedder, config.match_k)) {
      content += ToJsonLine(AssignmentToJson(a, vocab));
      content += '\n';
      ++summary.assignments;
    }
  }
  WriteFileAtomic(summary.output, content);
  return summary;
}

// ---------------------------------------------------------------------------
// refine

namespace {

constexpr const char* kCheckpointName = "refine.checkpoint.jsonl";

// Keeps the first line per image_id among `done`, dropping output written
// after the last checkpoint entry.
void TrimToCheckpoint(const fs::path& path, const std::unordered_set<std::string>& done) {
  if (!fs::exists(path)) return;
  std::string kept;
  std::unordered_set<std::string> seen;
  for (const auto& j : ReadJsonLines(path)) {
    const std::string id = GetString(j, "image_id");
    if (!done.contains(id) || !seen.insert(id).second) continue;
    kept += ToJsonLine(j);
    kept += '\n';
  }
  WriteFileAtomic(path, kept);
}

}  // namespace

RefineSummary RunRefine(const PipelineConfig& config, const fs::path& assignments_path,
                        const fs::path& vocab_path, const fs::path& out_dir,
                        const RefineOptions& options, LlmProvider* provider) {
  const EntityVocabulary vocab = EntityVocabulary::LoadFile(vocab_path);
  const std::string assignments_content = ReadFile(assignments_path);
  std::vector<CandidateAssignment> assignments;
  {
    std::unordered_set<std::string> ids;
    for (const auto& j : ParseJsonLines(assignments_content, assignments_path.string())) {
      assignments.push_back(AssignmentFromJson(j, vocab));
      if (!ids.insert(assignments.back().image_id).second) {
        throw Error(ErrorCode::kParseError, "duplicate image_id " + assignments.back().image_id);
      }
    }
  }
  std::unordered_map<std::string, std::string> proxies;
  if (options.caption_proxies) {
    for (const auto& j : ReadJsonLines(*options.caption_proxies)) {
      proxies[GetString(j, "image_id")] = GetString(j, "proxy");
    }
  }

  std::unique_ptr<LlmProvider> owned;
  if (provider == nullptr) {
    owned = MakeProvider(config);
    provider = owned.get();
  }

  EnsureDir(out_dir);
  const fs::path records_path = out_dir / "records.jsonl";
  const fs::path rejects_path = out_dir / "rejects.jsonl";
  const fs::path checkpoint_path = out_dir / kCheckpointName;

  nlohmann::ordered_json header;
  header["config_hash"] = config.Hash();
  header["input_sha256"] = Sha256Hex(assignments_content);
  if (options.caption_proxies) header["proxies_sha256"] = Sha256Hex(ReadFile(*options.caption_proxies));

  std::unordered_set<std::string> done;
  std::size_t provider_failures = 0;
  const bool resuming = options.resume && fs::exists(checkpoint_path);
  if (resuming) {
    auto lines = ReadJsonLines(checkpoint_path);
    if (lines.empty() || lines.front() != header) {
      throw Error(ErrorCode::kConfigMismatch,
                  "checkpoint was written with a different configuration or input");
    }
    for (std::size_t i = 1; i < lines.size(); ++i) {
      done.insert(GetString(lines[i], "image_id"));
      if (lines[i].value("status", "") == "provider_failure") ++provider_failures;
    }
    TrimToCheckpoint(records_path, done);
    TrimToCheckpoint(rejects_path, done);
  } else {
    WriteFileAtomic(checkpoint_path, ToJsonLine(header) + "\n");
    WriteFileAtomic(records_path, "");
    WriteFileAtomic(rejects_path, "");
  }

  JsonLinesAppender records_out(records_path, false);
  JsonLinesAppender rejects_out(rejects_path, false);
  JsonLinesAppender checkpoint_out(checkpoint_path, false);

  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    if (!done.contains(assignments[i].image_id)) pending.push_back(i);
  }
  const std::size_t limit = std::min(pending.size(), options.stop_after.value_or(pending.size()));

  RefineConfig refine_config;
  refine_config.retries = config.retries;
  auto work = [&](std::size_t idx) {
    std::optional<std::string_view> proxy;
    if (options.caption_proxies) {
      auto it = proxies.find(assignments[idx].image_id);
      if (it == proxies.end()) {
        throw Error(ErrorCode::kParseError, "no caption proxy for " + assignments[idx].image_id);
      }
      proxy = it->second;
    }
    return RefineRecord(*provider, assignments[idx], vocab, refine_config, proxy);
  };

  // Up to max_in_flight records run concurrently; results are committed
  // strictly in input order.
  std::deque<std::future<RefineResult>> in_flight;
  std::size_t launched = 0;
  std::size_t committed = 0;
  while (committed < limit) {
    while (launched < limit && in_flight.size() < config.max_in_flight) {
      in_flight.push_back(std::async(std::launch::async, work, pending[launched]));
      ++launched;
    }
    RefineResult result = in_flight.front().get();
    in_flight.pop_front();
    const CandidateAssignment& a = assignments[pending[committed]];
    std::string status = "ok";
    if (result.record) {
      records_out.Append(RecordToJson(*result.record, vocab));
    } else {
      rejects_out.Append(RejectionToJson(*result.rejection));
      status = result.rejection->provider_failure ? "provider_failure" : "rejected";
      if (result.rejection->provider_failure) ++provider_failures;
    }
    checkpoint_out.Append(nlohmann::ordered_json{{"image_id", a.image_id}, {"status", status}});
    ++committed;
  }

  RefineSummary summary;
  summary.total = assignments.size();
  summary.processed_this_run = committed;
  summary.provider_failures = provider_failures;
  summary.complete = done.size() + committed == assignments.size();
  std::vector<RefinedRecord> all;
  for (const auto& j : ReadJsonLines(records_path)) {
    all.push_back(RecordFromJson(j, vocab));
    if (!all.back().outcome.warnings.empty()) ++summary.warnings;
  }
  summary.accepted = all.size();
  summary.rejected = ReadJsonLines(rejects_path).size();
  if (!all.empty()) summary.correction_rate = CorrectionRate(all);

  nlohmann::ordered_json stats;
  stats["total"] = summary.total;
  stats["accepted"] = summary.accepted;
  stats["rejected"] = summary.rejected;
  stats["provider_failures"] = summary.provider_failures;
  stats["rationale_warnings"] = summary.warnings;
  stats["correction_rate"] =
      summary.correction_rate ? nlohmann::ordered_json(*summary.correction_rate) : nullptr;
  stats["complete"] = summary.complete;
  stats["config_hash"] = config.Hash();
  WriteFileAtomic(out_dir / "refine_stats.json", stats.dump(2) + "\n");
  return summary;
}

// ---------------------------------------------------------------------------
// build

BuildSummary RunBuild(const PipelineConfig& config, const fs::path& records_path,
                      const fs::path& vocab_path, const fs::path& out_dir,
                      const BuildOptions& options) {
  if (options.eval_embeddings.has_value() != options.record_embeddings.has_value()) {
    throw Error(ErrorCode::kInvalidArgument,
                "--eval-embeddings and --record-embeddings must be given together");
  }
  const EntityVocabulary vocab = EntityVocabulary::LoadFile(vocab_path);
  std::vector<RefinedRecord> records;
  for (const auto& j : ReadJsonLines(records_path)) records.push_back(RecordFromJson(j, vocab));

  BuildSummary summary;
  summary.records = records.size();
  std::vector<RefinedRecord> kept = records;
  std::string removed_log;
  if (options.eval_embeddings) {
    auto [eval, eval_ids] = LoadEmbeddings(*options.eval_embeddings, "id");
    auto [by_image, image_ids] = LoadEmbeddings(*options.record_embeddings, "image_id");
    std::unordered_map<std::string, std::size_t> row_of;
    for (std::size_t i = 0; i < image_ids.size(); ++i) row_of[image_ids[i]] = i;
    EmbeddingMatrix record_vecs(by_image.dim());
    for (const auto& r : records) {
      auto it = row_of.find(r.image_id);
      if (it == row_of.end()) {
        throw Error(ErrorCode::kLengthMismatch, "no embedding for record " + r.image_id);
      }
      record_vecs.Append(by_image.row(it->second));
    }
    const LeakFilterResult leak = LeakFilter(record_vecs, eval, config.leak_threshold);
    auto parts = PartitionByLeak<RefinedRecord>(records, leak);
    kept = std::move(parts.first);
    for (std::size_t i : leak.removed) {
      removed_log += ToJsonLine(nlohmann::ordered_json{
          {"image_id", records[i].image_id}, {"max_similarity", leak.max_similarity[i]}});
      removed_log += '\n';
    }
    summary.removed = leak.removed.size();
  }
  EnsureDir(out_dir);
  WriteFileAtomic(out_dir / "leak_removed.jsonl", removed_log);

  const std::vector<TrainingExample> examples = ExpandAll(kept, config.prompts);
  summary.examples = examples.size();
  const fs::path shard_dir = out_dir / "shards";
  std::error_code ec;
  fs::remove_all(shard_dir, ec);
  const std::string hash = config.Hash();
  if (options.seen_entities) {
    std::set<std::string> seen;
    for (std::string_view line : SplitLines(ReadFile(*options.seen_entities))) {
      if (!IsBlank(line)) seen.insert(NormalizeName(line));
    }
    auto [seen_ex, unseen_ex] = SplitSeenUnseen(examples, seen);
    summary.shards += WriteShards(seen_ex, config.shard_size, shard_dir, hash, "seen").shards.size();
    summary.shards +=
        WriteShards(unseen_ex, config.shard_size, shard_dir, hash, "unseen").shards.size();
  } else {
    summary.shards = WriteShards(examples, config.shard_size, shard_dir, hash, "shard").shards.size();
  }

  nlohmann::ordered_json stats{{"records", summary.records},
                               {"removed", summary.removed},
                               {"examples", summary.examples},
                               {"shards", summary.shards},
                               {"config_hash", hash}};
  WriteFileAtomic(out_dir / "build_stats.json", stats.dump(2) + "\n");
  return summary;
}

// ---------------------------------------------------------------------------
// decode

std::size_t RunDecode(const PipelineConfig& config, const fs::path& queries_path,
                      const fs::path& vocab_path, const fs::path& scorer_path,
                      const fs::path& out_dir, const DecodeOptions& options) {
  const EntityVocabulary vocab = EntityVocabulary::LoadFile(vocab_path);
  const ByteTokenizer tokenizer;
  nlohmann::json fixture;
  try {
    fixture = nlohmann::json::parse(ReadFile(scorer_path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, scorer_path.string() + ": " + e.what());
  }
  const std::unique_ptr<Scorer> scorer = LoadScorerFixture(fixture, tokenizer);

  BeamConfig beam;
  beam.mode = ParseDecodeMode(config.decode_mode);
  beam.beam_size = config.beam_size;
  beam.max_len = config.max_len;

  std::optional<TokenTrie> trie;
  if (options.trie) {
    trie = TokenTrie::Load(*options.trie);
  } else if (beam.mode == DecodeMode::kFullTrie || options.save_trie) {
    trie = TokenTrie::Build(vocab, tokenizer);
  }
  if (trie && options.save_trie) trie->Save(*options.save_trie);

  EnsureDir(out_dir);
  std::string content;
  std::unordered_set<std::string> ids;
  std::size_t count = 0;
  for (const auto& q : ReadJsonLines(queries_path)) {
    const std::string id = GetString(q, "query_id");
    if (!ids.insert(id).second) throw Error(ErrorCode::kDuplicateQueryId, id);
    const std::string question = q.value("question", "");
    auto hyps = BeamSearch(*scorer, question, beam, tokenizer, trie ? &*trie : nullptr, &vocab);
    nlohmann::ordered_json ranked = nlohmann::ordered_json::array();
    nlohmann::ordered_json logprobs = nlohmann::ordered_json::array();
    for (const auto& h : hyps) {
      ranked.push_back(h.entity ? vocab.name(*h.entity) : h.text);
      logprobs.push_back(h.logprob);
    }
    content += ToJsonLine(nlohmann::ordered_json{
        {"query_id", id}, {"ranked", std::move(ranked)}, {"logprobs", std::move(logprobs)}});
    content += '\n';
    ++count;
  }
  WriteFileAtomic(out_dir / "predictions.jsonl", content);
  return count;
}

// ---------------------------------------------------------------------------
// eval

EvalReport RunEval(const EvalFiles& files, const EvalOptions& options, const fs::path& out_dir) {
  if (files.mapping && !files.vocab) {
    throw Error(ErrorCode::kInvalidArgument, "--mapping needs --vocab to resolve entities");
  }
  std::optional<EntityVocabulary> vocab;
  if (files.vocab) vocab = EntityVocabulary::LoadFile(*files.vocab);
  std::optional<LabelMapping> mapping;
  if (files.mapping) mapping = LabelMapping::LoadFile(*files.mapping);
  EntityInterner interner(vocab ? &*vocab : nullptr);

  std::vector<GoldItem> golds;
  for (const auto& j : ReadJsonLines(files.gold)) {
    GoldItem g;
    g.query_id = GetString(j, "query_id");
    const std::string entity = GetString(j, "entity");
    if (mapping) {
      g.gold_entity = ApplyLabelMapping(*mapping, std::span<const std::string>(&entity, 1), *vocab)[0];
    } else {
      g.gold_entity = interner.Intern(entity);
    }
    const std::string split = GetString(j, "split");
    if (split == "seen") {
      g.split = Split::kSeen;
    } else if (split == "unseen") {
      g.split = Split::kUnseen;
    } else {
      throw Error(ErrorCode::kParseError, "split must be seen or unseen, got " + split);
    }
    g.question = j.value("question", "");
    golds.push_back(std::move(g));
  }
  std::vector<Prediction> predictions;
  for (const auto& j : ReadJsonLines(files.predictions)) {
    Prediction p;
    p.query_id = GetString(j, "query_id");
    auto it = j.find("ranked");
    if (it == j.end() || !it->is_array()) {
      throw Error(ErrorCode::kParseError, "prediction " + p.query_id + " without \"ranked\"");
    }
    for (const auto& name : *it) p.ranked.push_back(interner.Intern(name.get<std::string>()));
    predictions.push_back(std::move(p));
  }

  EvalReport report = Evaluate(predictions, golds, options);
  if (!out_dir.empty()) {
    EnsureDir(out_dir);
    WriteFileAtomic(out_dir / "report.json", ReportToJson(report).dump(2) + "\n");
    WriteFileAtomic(out_dir / "report.txt", ReportToText(report));
  }
  return report;
}

// ---------------------------------------------------------------------------
// stats

nlohmann::ordered_json RefineStats(const fs::path& refine_dir) {
  const fs::path records_path = refine_dir / "records.jsonl";
  const fs::path rejects_path = refine_dir / "rejects.jsonl";
  if (!fs::exists(records_path)) {
    throw Error(ErrorCode::kIoError, "no records.jsonl in " + refine_dir.string());
  }
  std::size_t validated = 0;
  std::size_t corrected = 0;
  for (const auto& j : ReadJsonLines(records_path)) {
    (j.value("verdict", "") == "corrected" ? corrected : validated)++;
  }
  std::map<std::string, std::size_t> by_stage;
  std::size_t rejected = 0;
  if (fs::exists(rejects_path)) {
    for (const auto& j : ReadJsonLines(rejects_path)) {
      ++by_stage[j.value("stage", "")];
      ++rejected;
    }
  }
  nlohmann::ordered_json out;
  out["records"] = validated + corrected;
  out["validated"] = validated;
  out["corrected"] = corrected;
  out["rejected"] = rejected;
  out["rejected_by_stage"] = by_stage;
  const std::size_t n = validated + corrected;
  out["correction_rate"] =
      n ? nlohmann::ordered_json(static_cast<double>(corrected) / static_cast<double>(n)) : nullptr;
  return out;
}

// ---------------------------------------------------------------------------
// grad-check

GradCheckSummary RunGradCheck(std::uint64_t seed, std::size_t instances, double epsilon,
                              double step) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> rows_dist(1, 8);
  std::uniform_int_distribution<std::size_t> cols_dist(2, 12);
  std::normal_distribution<double> logit_dist(0.0, 2.0);
  GradCheckSummary summary;
  for (std::size_t n = 0; n < instances; ++n) {
    const std::size_t rows = rows_dist(rng);
    const std::size_t cols = cols_dist(rng);
    std::vector<double> values(rows * cols);
    for (double& v : values) v = logit_dist(rng);
    std::vector<std::size_t> targets(rows);
    std::uniform_int_distribution<std::size_t> target_dist(0, cols - 1);
    for (auto& t : targets) t = target_dist(rng);
    const objective::TokenLogits logits(rows, cols, std::move(values));
    const auto result = objective::CheckGradient(logits, targets, epsilon, step);
    summary.max_relative_error = std::max(summary.max_relative_error, result.max_relative_error);
    ++summary.instances;
  }
  return summary;
}

}  // namespace erkit
