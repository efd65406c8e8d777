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

#include "erkit/embedding.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "erkit/error.h"
#include "erkit/io.h"
#include "erkit/simd/kernels.h"

namespace erkit {
namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

std::uint64_t Fnv1a(std::string_view bytes) {
  std::uint64_t h = kFnvOffset;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

bool NeighborBefore(const Neighbor& a, const Neighbor& b) {
  if (a.similarity != b.similarity) return a.similarity > b.similarity;
  return a.index < b.index;
}

std::string RequireString(const nlohmann::ordered_json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) {
    throw Error(ErrorCode::kParseError, std::string("missing string field \"") + key + "\"");
  }
  return it->get<std::string>();
}

}  // namespace

bool NormalizeL2(std::span<float> v) {
  double sq = 0.0;
  for (float x : v) sq += static_cast<double>(x) * x;
  if (!(sq > 0.0) || !std::isfinite(sq)) return false;
  const double inv = 1.0 / std::sqrt(sq);
  for (float& x : v) x = static_cast<float>(x * inv);
  return true;
}

void EmbeddingMatrix::Append(std::span<const float> v) {
  if (v.size() != dim_) {
    throw Error(ErrorCode::kDimensionMismatch,
                "expected " + std::to_string(dim_) + ", got " + std::to_string(v.size()));
  }
  std::vector<float> copy(v.begin(), v.end());
  if (!NormalizeL2(copy)) {
    throw Error(ErrorCode::kInvalidArgument, "cannot normalize a zero or non-finite vector");
  }
  values_.insert(values_.end(), copy.begin(), copy.end());
}

TrigramEmbedder::TrigramEmbedder(std::size_t dim) : dim_(dim) {
  if (dim_ == 0) throw Error(ErrorCode::kInvalidArgument, "embedding dim must be positive");
}

std::vector<float> TrigramEmbedder::Embed(std::string_view text) const {
  std::string padded = "\x02\x02";
  padded.reserve(text.size() + 4);
  for (char c : text) {
    padded.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c + ('a' - 'A')) : c);
  }
  padded += "\x03\x03";
  std::vector<float> v(dim_, 0.0f);
  for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
    v[Fnv1a(std::string_view(padded).substr(i, 3)) % dim_] += 1.0f;
  }
  NormalizeL2(v);
  return v;
}

EmbeddingMatrix EmbedTexts(const EmbeddingProvider& provider,
                           std::span<const std::string> texts) {
  EmbeddingMatrix out(provider.dim());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    try {
      out.Append(provider.Embed(texts[i]));
    } catch (const std::exception& e) {
      throw Error(ErrorCode::kProviderError,
                  "text " + std::to_string(i) + ": " + e.what(),
                  static_cast<std::int64_t>(i));
    }
  }
  return out;
}

std::vector<Neighbor> KnnOne(std::span<const float> query, const EmbeddingMatrix& corpus,
                             std::size_t k) {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  if (query.size() != corpus.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "query dim " + std::to_string(query.size()) + " vs corpus dim " +
                    std::to_string(corpus.dim()));
  }
  const std::size_t n = corpus.rows();
  std::vector<float> scores(n);
  simd::DotRows(query, corpus.data(), scores);
  std::vector<Neighbor> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = Neighbor{i, scores[i]};
  const std::size_t keep = std::min(k, n);
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(keep), all.end(),
                    NeighborBefore);
  all.resize(keep);
  return all;
}

std::vector<std::vector<Neighbor>> Knn(const EmbeddingMatrix& queries,
                                       const EmbeddingMatrix& corpus, std::size_t k) {
  if (queries.dim() != corpus.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::to_string(queries.dim()) + " vs " + std::to_string(corpus.dim()));
  }
  std::vector<std::vector<Neighbor>> results;
  results.reserve(queries.rows());
  for (std::size_t q = 0; q < queries.rows(); ++q) {
    results.push_back(KnnOne(queries.row(q), corpus, k));
  }
  return results;
}

std::vector<CandidateAssignment> BuildCandidateAssignments(
    const EntityVocabulary& vocab, std::span<const CaptionedImage> corpus,
    const EmbeddingProvider& provider, std::size_t k) {
  if (corpus.empty()) throw Error(ErrorCode::kEmptyInput, "corpus is empty");
  {
    std::unordered_set<std::string_view> ids;
    for (const auto& image : corpus) {
      if (!ids.insert(image.image_id).second) {
        throw Error(ErrorCode::kInvalidArgument, "duplicate image_id " + image.image_id);
      }
    }
  }
  std::vector<std::string> names;
  names.reserve(vocab.size());
  for (const auto& r : vocab.records()) names.push_back(r.canonical_name);
  std::vector<std::string> captions;
  captions.reserve(corpus.size());
  for (const auto& image : corpus) captions.push_back(image.caption);

  EmbeddingMatrix entity_vecs = EmbedTexts(provider, names);
  EmbeddingMatrix caption_vecs = EmbedTexts(provider, captions);

  // Best (similarity, entity id) seen so far for each image.
  struct Best {
    bool set = false;
    float similarity = 0.0f;
    EntityId entity = 0;
  };
  std::vector<Best> best(corpus.size());
  for (std::size_t e = 0; e < entity_vecs.rows(); ++e) {
    const auto entity = static_cast<EntityId>(e);
    for (const Neighbor& n : KnnOne(entity_vecs.row(e), caption_vecs, k)) {
      Best& b = best[n.index];
      if (!b.set || n.similarity > b.similarity ||
          (n.similarity == b.similarity && entity < b.entity)) {
        b = Best{true, n.similarity, entity};
      }
    }
  }

  std::vector<CandidateAssignment> out;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (!best[i].set) continue;
    out.push_back(CandidateAssignment{corpus[i].image_id, corpus[i].caption,
                                      corpus[i].image_ref, best[i].entity,
                                      best[i].similarity});
  }
  return out;
}

std::vector<CaptionedImage> LoadCorpus(const std::filesystem::path& path) {
  std::vector<CaptionedImage> corpus;
  for (const auto& j : ReadJsonLines(path)) {
    CaptionedImage image;
    image.image_id = RequireString(j, "image_id");
    image.caption = RequireString(j, "caption");
    if (auto it = j.find("image_ref"); it != j.end() && it->is_string()) {
      image.image_ref = it->get<std::string>();
    }
    corpus.push_back(std::move(image));
  }
  return corpus;
}

nlohmann::ordered_json AssignmentToJson(const CandidateAssignment& a,
                                        const EntityVocabulary& vocab) {
  nlohmann::ordered_json j;
  j["image_id"] = a.image_id;
  j["caption"] = a.caption;
  j["candidate_entity"] = vocab.name(a.candidate_entity_id);
  j["similarity"] = a.similarity;
  j["image_ref"] = a.image_ref;
  return j;
}

CandidateAssignment AssignmentFromJson(const nlohmann::ordered_json& j,
                                       const EntityVocabulary& vocab) {
  CandidateAssignment a;
  a.image_id = RequireString(j, "image_id");
  a.caption = RequireString(j, "caption");
  const std::string name = RequireString(j, "candidate_entity");
  auto id = vocab.Lookup(name);
  if (!id) throw Error(ErrorCode::kUnresolvedEntity, name);
  a.candidate_entity_id = *id;
  if (auto it = j.find("similarity"); it != j.end() && it->is_number()) {
    a.similarity = it->get<float>();
  }
  if (auto it = j.find("image_ref"); it != j.end() && it->is_string()) {
    a.image_ref = it->get<std::string>();
  }
  return a;
}

}  // namespace erkit
