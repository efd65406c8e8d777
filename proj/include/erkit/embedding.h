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

#ifndef ERKIT_EMBEDDING_H_
#define ERKIT_EMBEDDING_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "erkit/entity_kb.h"
#include "json.hpp"

namespace erkit {

// Scales `v` to unit L2 norm. Returns false (leaving `v` untouched) when the
// norm is zero or not finite.
bool NormalizeL2(std::span<float> v);

// Row-major store of unit-norm vectors sharing one dimension. Dot products
// between rows are cosine similarities.
class EmbeddingMatrix {
 public:
  explicit EmbeddingMatrix(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t rows() const { return dim_ == 0 ? 0 : values_.size() / dim_; }
  bool empty() const { return values_.empty(); }

  // Normalizes a copy of `v` and appends it. Throws kDimensionMismatch, or
  // kInvalidArgument for a zero vector.
  void Append(std::span<const float> v);

  std::span<const float> row(std::size_t i) const {
    return std::span<const float>(values_).subspan(i * dim_, dim_);
  }
  std::span<const float> data() const { return values_; }

 private:
  std::size_t dim_;
  std::vector<float> values_;
};

// Text embedding contract. Implementations must return vectors of dim().
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::size_t dim() const = 0;
  virtual std::vector<float> Embed(std::string_view text) const = 0;
};

// Deterministic test embedder: hashed character trigrams (ASCII-lowercased,
// padded with two boundary markers each side) counted into `dim` buckets.
class TrigramEmbedder final : public EmbeddingProvider {
 public:
  explicit TrigramEmbedder(std::size_t dim = 256);
  std::size_t dim() const override { return dim_; }
  std::vector<float> Embed(std::string_view text) const override;

 private:
  std::size_t dim_;
};

// One unit vector per text. Failures are reported as Error(kProviderError)
// with the failing index as detail.
EmbeddingMatrix EmbedTexts(const EmbeddingProvider& provider,
                           std::span<const std::string> texts);

struct Neighbor {
  std::size_t index = 0;
  float similarity = 0.0f;
};

// Exact top-k by cosine similarity, descending, ties to the lower corpus
// index. Each list has min(k, corpus.rows()) entries.
std::vector<std::vector<Neighbor>> Knn(const EmbeddingMatrix& queries,
                                       const EmbeddingMatrix& corpus, std::size_t k);
std::vector<Neighbor> KnnOne(std::span<const float> query, const EmbeddingMatrix& corpus,
                             std::size_t k);

struct CaptionedImage {
  std::string image_id;
  std::string caption;
  std::string image_ref;
};

struct CandidateAssignment {
  std::string image_id;
  std::string caption;
  std::string image_ref;
  EntityId candidate_entity_id = 0;
  float similarity = 0.0f;
};

// Every entity retrieves its top-k captions; each image keeps only its best
// (highest similarity, then lowest entity id) assignment. Output follows
// corpus order.
std::vector<CandidateAssignment> BuildCandidateAssignments(
    const EntityVocabulary& vocab, std::span<const CaptionedImage> corpus,
    const EmbeddingProvider& provider, std::size_t k);

// Corpus file: JSON-lines {"image_id", "caption", "image_ref"}.
std::vector<CaptionedImage> LoadCorpus(const std::filesystem::path& path);

nlohmann::ordered_json AssignmentToJson(const CandidateAssignment& a,
                                        const EntityVocabulary& vocab);
// Resolves "candidate_entity" against `vocab`; throws kUnresolvedEntity.
CandidateAssignment AssignmentFromJson(const nlohmann::ordered_json& j,
                                       const EntityVocabulary& vocab);

}  // namespace erkit

#endif  // ERKIT_EMBEDDING_H_
