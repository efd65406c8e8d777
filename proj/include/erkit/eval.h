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

#ifndef ERKIT_EVAL_H_
#define ERKIT_EVAL_H_

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "erkit/embedding.h"
#include "erkit/entity_kb.h"
#include "json.hpp"

namespace erkit {

enum class Split { kSeen, kUnseen };

struct GoldItem {
  std::string query_id;
  EntityId gold_entity = 0;
  Split split = Split::kSeen;
  std::string question;
};

struct Prediction {
  std::string query_id;
  std::vector<EntityId> ranked;  // best first; may be empty
};

// Fraction of golds whose entity is among the first k predictions. A gold
// without a prediction counts as wrong. Throws kInvalidArgument for k == 0,
// kDuplicateQueryId on repeated ids. Empty `golds` gives 0.
double TopKAccuracy(std::span<const Prediction> predictions, std::span<const GoldItem> golds,
                    std::size_t k);

// 2ab / (a + b); 0 when either argument is 0. Throws kNegativeInput.
double HarmonicMean(double a, double b);

struct SplitAccuracy {
  double seen = 0.0;
  double unseen = 0.0;
  double hm = 0.0;
};

struct EvalReport {
  double acc_seen = 0.0;
  double acc_unseen = 0.0;
  double hm = 0.0;
  std::size_t n_seen = 0;
  std::size_t n_unseen = 0;
  std::map<std::size_t, SplitAccuracy> per_k;
};

struct EvalOptions {
  std::vector<std::size_t> ks = {1, 5, 10};
  // With an empty split, report the other split's accuracy as hm instead of
  // failing with kEmptySplit.
  bool allow_empty_split = false;
};

EvalReport Evaluate(std::span<const Prediction> predictions, std::span<const GoldItem> golds,
                    const EvalOptions& options = {});

nlohmann::ordered_json ReportToJson(const EvalReport& report);
// Percentages with one decimal, HM first, as in the usual OVEN tables.
std::string ReportToText(const EvalReport& report);

// Dataset class label -> entity name. Labels are matched after
// NormalizeName; targets are stored normalized.
class LabelMapping {
 public:
  // Two tab-separated columns; '#' starts a comment line. Throws kParseError
  // or kInvalidArgument on a duplicate label.
  static LabelMapping Parse(std::string_view content);
  static LabelMapping LoadFile(const std::filesystem::path& path);

  std::optional<std::string> Find(std::string_view label) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::unordered_map<std::string, std::string> entries_;
};

// Throws kUnmappedLabel or kUnresolvedEntity.
std::vector<EntityId> ApplyLabelMapping(const LabelMapping& mapping,
                                        std::span<const std::string> labels,
                                        const EntityVocabulary& vocab);

struct MemoryBase {
  EmbeddingMatrix embeddings;
  std::vector<EntityId> labels;
};

// Label of the most similar memory item per query, ties to the lower index.
// Throws kEmptyMemory, kDimensionMismatch, kLengthMismatch.
std::vector<EntityId> VisualMatch(const MemoryBase& memory, const EmbeddingMatrix& queries);

// Assigns ids to entity names for evaluation files. Names already in the
// vocabulary keep their vocabulary id; other names get fresh ids after it.
class EntityInterner {
 public:
  explicit EntityInterner(const EntityVocabulary* vocab = nullptr);
  EntityId Intern(std::string_view name);

 private:
  const EntityVocabulary* vocab_;
  std::unordered_map<std::string, EntityId> extra_;
  EntityId next_;
};

}  // namespace erkit

#endif  // ERKIT_EVAL_H_
