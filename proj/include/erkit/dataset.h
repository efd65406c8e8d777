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

#ifndef ERKIT_DATASET_H_
#define ERKIT_DATASET_H_

#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "erkit/embedding.h"
#include "erkit/llm_refinement.h"
#include "json.hpp"

namespace erkit {

enum class Task { kEntity, kRationale, kQa };

std::string_view TaskName(Task task);

struct TrainingExample {
  Task task = Task::kEntity;
  std::string input_text;
  std::string target_text;
  std::string image_id;

  bool operator==(const TrainingExample&) const = default;
};

// Task inputs. Entity-task examples use `entity_prompt`; rationale examples
// use `rationale_prefix`; QA examples use the generated question.
struct TaskPrompts {
  std::string entity_prompt = "what is the main entity in this image?";
  std::string rationale_prefix = "[rationale]";
};

inline constexpr std::size_t kExamplesPerRecord = 2 + kQaPairsPerRecord;

// Entity, Rationale, then the three QA examples, in that order.
std::vector<TrainingExample> ExpandExamples(const RefinedRecord& record,
                                            const TaskPrompts& prompts);
std::vector<TrainingExample> ExpandAll(std::span<const RefinedRecord> records,
                                       const TaskPrompts& prompts);

struct LeakFilterResult {
  std::vector<std::size_t> kept;
  std::vector<std::size_t> removed;
  // Highest similarity of each record to any evaluation embedding, or -inf
  // when the evaluation set is empty.
  std::vector<float> max_similarity;
};

// Removes record i iff max_j <record_i, eval_j> > threshold (strict).
// Throws kDimensionMismatch, or kInvalidArgument for a threshold outside [0, 1].
LeakFilterResult LeakFilter(const EmbeddingMatrix& record_embeddings,
                            const EmbeddingMatrix& eval_embeddings, double threshold);

template <typename T>
std::pair<std::vector<T>, std::vector<T>> PartitionByLeak(std::span<const T> items,
                                                          const LeakFilterResult& result) {
  std::pair<std::vector<T>, std::vector<T>> out;
  for (std::size_t i : result.kept) out.first.push_back(items[i]);
  for (std::size_t i : result.removed) out.second.push_back(items[i]);
  return out;
}

// Entity and QA examples go by their own target; rationale examples follow
// the entity example of the same image. Names are compared normalized.
std::pair<std::vector<TrainingExample>, std::vector<TrainingExample>> SplitSeenUnseen(
    std::span<const TrainingExample> examples, const std::set<std::string>& seen_entities);

struct ShardEntry {
  std::string path;  // relative to the manifest's directory
  std::size_t count = 0;
  std::string sha256;
};

struct ShardManifest {
  std::vector<ShardEntry> shards;
  std::string config_hash;
};

nlohmann::ordered_json ExampleToJson(const TrainingExample& example);
TrainingExample ExampleFromJson(const nlohmann::ordered_json& j);

nlohmann::ordered_json ManifestToJson(const ShardManifest& manifest);
ShardManifest ManifestFromJson(const nlohmann::ordered_json& j);

// Writes `<dir>/<stem>-NNNNN.jsonl` shards of at most `shard_size` examples
// and `<dir>/<stem>.manifest.json`. Throws kInvalidArgument or kIoError.
ShardManifest WriteShards(std::span<const TrainingExample> examples, std::size_t shard_size,
                          const std::filesystem::path& dir, std::string_view config_hash,
                          std::string_view stem = "shard");

// Verifies each shard's hash and line count. Throws kManifestMismatch.
std::vector<TrainingExample> ReadShards(const std::filesystem::path& manifest_path);

}  // namespace erkit

#endif  // ERKIT_DATASET_H_
