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

#include "erkit/eval.h"

#include <algorithm>
#include <cstdio>
#include <unordered_set>

#include "erkit/error.h"
#include "erkit/io.h"
#include "erkit/simd/kernels.h"

namespace erkit {
namespace {

std::unordered_map<std::string_view, const Prediction*> IndexPredictions(
    std::span<const Prediction> predictions) {
  std::unordered_map<std::string_view, const Prediction*> index;
  for (const auto& p : predictions) {
    if (!index.emplace(p.query_id, &p).second) {
      throw Error(ErrorCode::kDuplicateQueryId, "prediction " + p.query_id);
    }
  }
  return index;
}

void CheckUniqueGolds(std::span<const GoldItem> golds) {
  std::unordered_set<std::string_view> ids;
  for (const auto& g : golds) {
    if (!ids.insert(g.query_id).second) {
      throw Error(ErrorCode::kDuplicateQueryId, "gold " + g.query_id);
    }
  }
}

bool HitAtK(const Prediction* p, EntityId gold, std::size_t k) {
  if (p == nullptr) return false;
  const std::size_t n = std::min(k, p->ranked.size());
  return std::find(p->ranked.begin(), p->ranked.begin() + static_cast<std::ptrdiff_t>(n), gold) !=
         p->ranked.begin() + static_cast<std::ptrdiff_t>(n);
}

}  // namespace

double TopKAccuracy(std::span<const Prediction> predictions, std::span<const GoldItem> golds,
                    std::size_t k) {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  CheckUniqueGolds(golds);
  if (golds.empty()) return 0.0;
  const auto index = IndexPredictions(predictions);
  std::size_t hits = 0;
  for (const auto& g : golds) {
    auto it = index.find(g.query_id);
    if (HitAtK(it == index.end() ? nullptr : it->second, g.gold_entity, k)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(golds.size());
}

double HarmonicMean(double a, double b) {
  if (a < 0.0 || b < 0.0) throw Error(ErrorCode::kNegativeInput, "harmonic mean of a negative");
  if (a == 0.0 || b == 0.0) return 0.0;
  return 2.0 * a * b / (a + b);
}

EvalReport Evaluate(std::span<const Prediction> predictions, std::span<const GoldItem> golds,
                    const EvalOptions& options) {
  CheckUniqueGolds(golds);
  const auto index = IndexPredictions(predictions);
  EvalReport report;
  for (const auto& g : golds) (g.split == Split::kSeen ? report.n_seen : report.n_unseen)++;
  if ((report.n_seen == 0 || report.n_unseen == 0) && !options.allow_empty_split) {
    throw Error(ErrorCode::kEmptySplit, report.n_seen == 0 ? "no seen queries" : "no unseen queries");
  }
  if (report.n_seen == 0 && report.n_unseen == 0) {
    throw Error(ErrorCode::kEmptySplit, "no queries");
  }

  std::vector<std::size_t> ks = options.ks;
  if (std::find(ks.begin(), ks.end(), 1) == ks.end()) ks.push_back(1);
  for (std::size_t k : ks) {
    if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
    std::size_t seen_hits = 0;
    std::size_t unseen_hits = 0;
    for (const auto& g : golds) {
      auto it = index.find(g.query_id);
      if (!HitAtK(it == index.end() ? nullptr : it->second, g.gold_entity, k)) continue;
      (g.split == Split::kSeen ? seen_hits : unseen_hits)++;
    }
    SplitAccuracy acc;
    acc.seen = report.n_seen ? static_cast<double>(seen_hits) / report.n_seen : 0.0;
    acc.unseen = report.n_unseen ? static_cast<double>(unseen_hits) / report.n_unseen : 0.0;
    if (report.n_seen == 0) {
      acc.hm = acc.unseen;
    } else if (report.n_unseen == 0) {
      acc.hm = acc.seen;
    } else {
      acc.hm = HarmonicMean(acc.seen, acc.unseen);
    }
    report.per_k[k] = acc;
  }
  report.acc_seen = report.per_k[1].seen;
  report.acc_unseen = report.per_k[1].unseen;
  report.hm = report.per_k[1].hm;
  return report;
}

nlohmann::ordered_json ReportToJson(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["acc_seen"] = report.acc_seen;
  j["acc_unseen"] = report.acc_unseen;
  j["hm"] = report.hm;
  j["n_seen"] = report.n_seen;
  j["n_unseen"] = report.n_unseen;
  nlohmann::ordered_json table = nlohmann::ordered_json::array();
  for (const auto& [k, acc] : report.per_k) {
    table.push_back(nlohmann::ordered_json{{"k", k}, {"seen", acc.seen}, {"unseen", acc.unseen},
                                           {"hm", acc.hm}});
  }
  j["per_k"] = std::move(table);
  return j;
}

std::string ReportToText(const EvalReport& report) {
  std::string out = "top-k      HM   seen unseen\n";
  char line[96];
  for (const auto& [k, acc] : report.per_k) {
    std::snprintf(line, sizeof(line), "top-%-3zu %6.1f %6.1f %6.1f\n", k, 100.0 * acc.hm,
                  100.0 * acc.seen, 100.0 * acc.unseen);
    out += line;
  }
  return out;
}

LabelMapping LabelMapping::Parse(std::string_view content) {
  LabelMapping mapping;
  std::size_t line_no = 0;
  for (std::string_view line : SplitLines(content)) {
    ++line_no;
    if (IsBlank(line) || line.front() == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw Error(ErrorCode::kParseError, "mapping line " + std::to_string(line_no) + " has no tab",
                  static_cast<std::int64_t>(line_no));
    }
    std::string label = NormalizeName(line.substr(0, tab));
    std::string entity = NormalizeName(line.substr(tab + 1));
    if (label.empty() || entity.empty()) {
      throw Error(ErrorCode::kParseError, "mapping line " + std::to_string(line_no) + " is empty",
                  static_cast<std::int64_t>(line_no));
    }
    if (!mapping.entries_.emplace(label, std::move(entity)).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate mapping label " + label);
    }
  }
  return mapping;
}

LabelMapping LabelMapping::LoadFile(const std::filesystem::path& path) {
  return Parse(ReadFile(path));
}

std::optional<std::string> LabelMapping::Find(std::string_view label) const {
  auto it = entries_.find(NormalizeName(label));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::vector<EntityId> ApplyLabelMapping(const LabelMapping& mapping,
                                        std::span<const std::string> labels,
                                        const EntityVocabulary& vocab) {
  std::vector<EntityId> out;
  out.reserve(labels.size());
  for (const auto& label : labels) {
    auto name = mapping.Find(label);
    if (!name) throw Error(ErrorCode::kUnmappedLabel, label);
    auto id = vocab.LookupCanonical(*name);
    if (!id) throw Error(ErrorCode::kUnresolvedEntity, *name);
    out.push_back(*id);
  }
  return out;
}

std::vector<EntityId> VisualMatch(const MemoryBase& memory, const EmbeddingMatrix& queries) {
  const std::size_t n = memory.embeddings.rows();
  if (n == 0) throw Error(ErrorCode::kEmptyMemory, "memory base is empty");
  if (memory.labels.size() != n) {
    throw Error(ErrorCode::kLengthMismatch, "one label per memory item required");
  }
  if (queries.rows() > 0 && queries.dim() != memory.embeddings.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, std::to_string(queries.dim()) + " vs " +
                                                   std::to_string(memory.embeddings.dim()));
  }
  std::vector<float> scores(n);
  std::vector<EntityId> out;
  out.reserve(queries.rows());
  for (std::size_t q = 0; q < queries.rows(); ++q) {
    simd::DotRows(queries.row(q), memory.embeddings.data(), scores);
    // max_element returns the first maximum, i.e. the lowest index on ties.
    const auto best = std::max_element(scores.begin(), scores.end());
    out.push_back(memory.labels[static_cast<std::size_t>(best - scores.begin())]);
  }
  return out;
}

EntityInterner::EntityInterner(const EntityVocabulary* vocab)
    : vocab_(vocab), next_(vocab ? static_cast<EntityId>(vocab->size()) : 0) {}

EntityId EntityInterner::Intern(std::string_view name) {
  std::string canonical = NormalizeName(name);
  if (vocab_ != nullptr) {
    if (auto id = vocab_->LookupCanonical(canonical)) return *id;
  }
  auto [it, inserted] = extra_.emplace(std::move(canonical), next_);
  if (inserted) ++next_;
  return it->second;
}

}  // namespace erkit
