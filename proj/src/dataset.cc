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

#include "erkit/dataset.h"

#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

#include "erkit/error.h"
#include "erkit/io.h"
#include "erkit/simd/kernels.h"

namespace erkit {

std::string_view TaskName(Task task) {
  switch (task) {
    case Task::kEntity: return "entity";
    case Task::kRationale: return "rationale";
    case Task::kQa: return "qa";
  }
  return "";
}

std::vector<TrainingExample> ExpandExamples(const RefinedRecord& record,
                                            const TaskPrompts& prompts) {
  std::vector<TrainingExample> out;
  out.reserve(kExamplesPerRecord);
  out.push_back({Task::kEntity, prompts.entity_prompt, record.outcome.entity_name,
                 record.image_id});
  out.push_back({Task::kRationale, prompts.rationale_prefix, record.outcome.rationale,
                 record.image_id});
  for (const QAPair& qa : record.qa_pairs) {
    out.push_back({Task::kQa, qa.question, qa.answer, record.image_id});
  }
  return out;
}

std::vector<TrainingExample> ExpandAll(std::span<const RefinedRecord> records,
                                       const TaskPrompts& prompts) {
  std::vector<TrainingExample> out;
  out.reserve(records.size() * kExamplesPerRecord);
  for (const auto& r : records) {
    auto examples = ExpandExamples(r, prompts);
    out.insert(out.end(), std::make_move_iterator(examples.begin()),
               std::make_move_iterator(examples.end()));
  }
  return out;
}

LeakFilterResult LeakFilter(const EmbeddingMatrix& record_embeddings,
                            const EmbeddingMatrix& eval_embeddings, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "leak threshold must lie in [0, 1]");
  }
  LeakFilterResult result;
  const std::size_t n = record_embeddings.rows();
  result.max_similarity.assign(n, -std::numeric_limits<float>::infinity());
  if (!eval_embeddings.empty() && n > 0 && record_embeddings.dim() != eval_embeddings.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::to_string(record_embeddings.dim()) + " vs " +
                    std::to_string(eval_embeddings.dim()));
  }
  std::vector<float> scores(eval_embeddings.rows());
  for (std::size_t i = 0; i < n; ++i) {
    if (!scores.empty()) {
      simd::DotRows(record_embeddings.row(i), eval_embeddings.data(), scores);
      for (float s : scores) result.max_similarity[i] = std::max(result.max_similarity[i], s);
    }
    if (static_cast<double>(result.max_similarity[i]) > threshold) {
      result.removed.push_back(i);
    } else {
      result.kept.push_back(i);
    }
  }
  return result;
}

std::pair<std::vector<TrainingExample>, std::vector<TrainingExample>> SplitSeenUnseen(
    std::span<const TrainingExample> examples, const std::set<std::string>& seen_entities) {
  std::set<std::string> seen;
  for (const auto& name : seen_entities) seen.insert(NormalizeName(name));
  std::map<std::string, bool> image_seen;
  for (const auto& ex : examples) {
    if (ex.task == Task::kEntity) {
      image_seen[ex.image_id] = seen.contains(NormalizeName(ex.target_text));
    }
  }
  std::pair<std::vector<TrainingExample>, std::vector<TrainingExample>> out;
  for (const auto& ex : examples) {
    bool is_seen = false;
    if (ex.task == Task::kRationale) {
      auto it = image_seen.find(ex.image_id);
      is_seen = it != image_seen.end() && it->second;
    } else {
      is_seen = seen.contains(NormalizeName(ex.target_text));
    }
    (is_seen ? out.first : out.second).push_back(ex);
  }
  return out;
}

nlohmann::ordered_json ExampleToJson(const TrainingExample& example) {
  nlohmann::ordered_json j;
  j["task"] = TaskName(example.task);
  j["input"] = example.input_text;
  j["target"] = example.target_text;
  j["image_id"] = example.image_id;
  return j;
}

TrainingExample ExampleFromJson(const nlohmann::ordered_json& j) {
  try {
    TrainingExample ex;
    const auto task = j.at("task").get<std::string>();
    if (task == "entity") {
      ex.task = Task::kEntity;
    } else if (task == "rationale") {
      ex.task = Task::kRationale;
    } else if (task == "qa") {
      ex.task = Task::kQa;
    } else {
      throw Error(ErrorCode::kParseError, "unknown task " + task);
    }
    ex.input_text = j.at("input").get<std::string>();
    ex.target_text = j.at("target").get<std::string>();
    ex.image_id = j.at("image_id").get<std::string>();
    return ex;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("example: ") + e.what());
  }
}

nlohmann::ordered_json ManifestToJson(const ShardManifest& manifest) {
  nlohmann::ordered_json shards = nlohmann::ordered_json::array();
  for (const auto& s : manifest.shards) {
    shards.push_back(nlohmann::ordered_json{{"path", s.path}, {"count", s.count}, {"sha256", s.sha256}});
  }
  return nlohmann::ordered_json{{"shards", std::move(shards)}, {"config_hash", manifest.config_hash}};
}

ShardManifest ManifestFromJson(const nlohmann::ordered_json& j) {
  try {
    ShardManifest m;
    for (const auto& s : j.at("shards")) {
      m.shards.push_back(ShardEntry{s.at("path").get<std::string>(), s.at("count").get<std::size_t>(),
                                    s.at("sha256").get<std::string>()});
    }
    m.config_hash = j.at("config_hash").get<std::string>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("manifest: ") + e.what());
  }
}

ShardManifest WriteShards(std::span<const TrainingExample> examples, std::size_t shard_size,
                          const std::filesystem::path& dir, std::string_view config_hash,
                          std::string_view stem) {
  if (shard_size == 0) throw Error(ErrorCode::kInvalidArgument, "shard_size must be >= 1");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + dir.string() + ": " + ec.message());

  ShardManifest manifest;
  manifest.config_hash = std::string(config_hash);
  for (std::size_t start = 0, index = 0; start < examples.size(); start += shard_size, ++index) {
    const std::size_t end = std::min(examples.size(), start + shard_size);
    std::string content;
    for (std::size_t i = start; i < end; ++i) {
      content += ToJsonLine(ExampleToJson(examples[i]));
      content += '\n';
    }
    char name[64];
    std::snprintf(name, sizeof(name), "-%05zu.jsonl", index);
    const std::string file = std::string(stem) + name;
    WriteFileAtomic(dir / file, content);
    manifest.shards.push_back(ShardEntry{file, end - start, Sha256Hex(content)});
  }
  WriteFileAtomic(dir / (std::string(stem) + ".manifest.json"),
                  ManifestToJson(manifest).dump(2) + "\n");
  return manifest;
}

std::vector<TrainingExample> ReadShards(const std::filesystem::path& manifest_path) {
  nlohmann::ordered_json manifest_json;
  try {
    manifest_json = nlohmann::ordered_json::parse(ReadFile(manifest_path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, manifest_path.string() + ": " + e.what());
  }
  const ShardManifest manifest = ManifestFromJson(manifest_json);
  const std::filesystem::path dir = manifest_path.parent_path();
  std::vector<TrainingExample> out;
  for (const auto& shard : manifest.shards) {
    const std::string content = ReadFile(dir / shard.path);
    if (Sha256Hex(content) != shard.sha256) {
      throw Error(ErrorCode::kManifestMismatch, shard.path + ": sha256 differs");
    }
    auto lines = ParseJsonLines(content, shard.path);
    if (lines.size() != shard.count) {
      throw Error(ErrorCode::kManifestMismatch, shard.path + ": expected " +
                                                    std::to_string(shard.count) + " examples, found " +
                                                    std::to_string(lines.size()));
    }
    for (const auto& j : lines) out.push_back(ExampleFromJson(j));
  }
  return out;
}

}  // namespace erkit
