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

#ifndef ERKIT_PIPELINE_H_
#define ERKIT_PIPELINE_H_

// Pipeline stages behind the command-line tool. Every stage is deterministic
// given its inputs, the configuration and the provider fixtures.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "erkit/beam_search.h"
#include "erkit/dataset.h"
#include "erkit/eval.h"
#include "erkit/llm_refinement.h"
#include "json.hpp"

namespace erkit {

struct PipelineConfig {
  // "mock" reads fixtures from `mock_fixtures`; "http" uses PROVIDER_URL and
  // PROVIDER_TOKEN from the environment.
  std::string provider = "mock";
  std::string mock_fixtures;
  int provider_timeout_seconds = 60;

  std::string embedder = "trigram";
  std::size_t embedding_dim = 256;
  std::size_t match_k = 5;

  int retries = 2;
  std::size_t max_in_flight = 8;

  double leak_threshold = 0.95;
  TaskPrompts prompts;
  std::size_t shard_size = 1000;

  std::string decode_mode = "last-step";
  std::size_t beam_size = kDefaultBeamSize;
  std::size_t max_len = kDefaultMaxLen;

  double label_smoothing = 0.2;
  std::uint64_t seed = 0;

  // Directory the config file was read from; relative fixture paths resolve
  // against it. Not part of the hash.
  std::filesystem::path base_dir;

  // Unknown keys are rejected. Relative fixture paths resolve against
  // `base_dir`. Throws kInvalidArgument for out-of-range values.
  static PipelineConfig FromJson(const nlohmann::json& j,
                                 const std::filesystem::path& base_dir = {});
  static PipelineConfig LoadFile(const std::filesystem::path& path);

  nlohmann::json ToJson() const;
  // SHA-256 of the canonical (sorted-key, compact) JSON form.
  std::string Hash() const;
  void Validate() const;
};

std::unique_ptr<LlmProvider> MakeProvider(const PipelineConfig& config);
std::unique_ptr<EmbeddingProvider> MakeEmbedder(const PipelineConfig& config);

// --- match -----------------------------------------------------------------

struct MatchSummary {
  std::size_t images = 0;
  std::size_t assignments = 0;
  std::filesystem::path output;
};

// Writes <out>/assignments.jsonl.
MatchSummary RunMatch(const PipelineConfig& config, const std::filesystem::path& corpus,
                      const std::filesystem::path& vocab, const std::filesystem::path& out_dir);

// --- refine ----------------------------------------------------------------

struct RefineOptions {
  bool resume = false;
  // Stop after this many newly processed records, leaving a resumable
  // checkpoint behind.
  std::optional<std::size_t> stop_after;
  // JSON-lines {"image_id", "proxy"}: text-only mode with caption proxies.
  std::optional<std::filesystem::path> caption_proxies;
};

struct RefineSummary {
  std::size_t total = 0;
  std::size_t processed_this_run = 0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t provider_failures = 0;
  std::size_t warnings = 0;
  std::optional<double> correction_rate;
  bool complete = false;
};

// Writes <out>/records.jsonl, <out>/rejects.jsonl, <out>/refine.checkpoint.jsonl
// and <out>/refine_stats.json. Throws kConfigMismatch when resuming under a
// different configuration.
RefineSummary RunRefine(const PipelineConfig& config, const std::filesystem::path& assignments,
                        const std::filesystem::path& vocab, const std::filesystem::path& out_dir,
                        const RefineOptions& options, LlmProvider* provider = nullptr);

// --- build -----------------------------------------------------------------

struct BuildOptions {
  // JSON-lines {"id", "embedding"}; enables the leak filter.
  std::optional<std::filesystem::path> eval_embeddings;
  // JSON-lines {"image_id", "embedding"}; required with eval_embeddings.
  std::optional<std::filesystem::path> record_embeddings;
  // One entity name per line; splits the output into seen/unseen shards.
  std::optional<std::filesystem::path> seen_entities;
};

struct BuildSummary {
  std::size_t records = 0;
  std::size_t removed = 0;
  std::size_t examples = 0;
  std::size_t shards = 0;
};

// Writes shards and manifests under <out>/shards and the removed records to
// <out>/leak_removed.jsonl.
BuildSummary RunBuild(const PipelineConfig& config, const std::filesystem::path& records,
                      const std::filesystem::path& vocab, const std::filesystem::path& out_dir,
                      const BuildOptions& options);

// --- decode ----------------------------------------------------------------

struct DecodeOptions {
  std::optional<std::filesystem::path> trie;       // load instead of building
  std::optional<std::filesystem::path> save_trie;  // write the built trie
};

// Queries: JSON-lines {"query_id", "question"}. Writes <out>/predictions.jsonl
// with {"query_id", "ranked", "logprobs"}. Returns the number of queries.
std::size_t RunDecode(const PipelineConfig& config, const std::filesystem::path& queries,
                      const std::filesystem::path& vocab, const std::filesystem::path& scorer,
                      const std::filesystem::path& out_dir, const DecodeOptions& options);

// --- eval ------------------------------------------------------------------

struct EvalFiles {
  std::filesystem::path predictions;
  std::filesystem::path gold;
  std::optional<std::filesystem::path> mapping;  // requires vocab
  std::optional<std::filesystem::path> vocab;
};

// Writes <out>/report.json and <out>/report.txt when `out_dir` is non-empty.
EvalReport RunEval(const EvalFiles& files, const EvalOptions& options,
                   const std::filesystem::path& out_dir);

// --- stats -----------------------------------------------------------------

// Summary of a refine output directory: record/reject counts, verdicts,
// rejects per stage and the correction rate.
nlohmann::ordered_json RefineStats(const std::filesystem::path& refine_dir);

// --- grad-check --------------------------------------------------------------

struct GradCheckSummary {
  std::size_t instances = 0;
  double max_relative_error = 0.0;
};

// Random K x V instances (K in [1, 8], V in [2, 12]) drawn from `seed`.
GradCheckSummary RunGradCheck(std::uint64_t seed, std::size_t instances, double epsilon,
                              double step = 1e-5);

}  // namespace erkit

#endif  // ERKIT_PIPELINE_H_
