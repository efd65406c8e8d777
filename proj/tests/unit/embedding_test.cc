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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "common/error_matchers.h"
#include "common/oracles.h"
#include "common/test_util.h"
#include "erkit/embedding.h"
#include "erkit/entity_kb.h"
#include "erkit/io.h"

namespace erkit {
namespace {

double Norm(const std::vector<float>& v) {
  double s = 0.0;
  for (float x : v) s += static_cast<double>(x) * x;
  return std::sqrt(s);
}

std::vector<float> RandomUnit(std::mt19937& rng, std::size_t dim) {
  std::normal_distribution<float> dist;
  std::vector<float> v(dim);
  for (auto& x : v) x = dist(rng);
  NormalizeL2(v);
  return v;
}

EmbeddingMatrix ToMatrix(const std::vector<std::vector<float>>& rows, std::size_t dim) {
  EmbeddingMatrix m(dim);
  for (const auto& r : rows) m.Append(r);
  return m;
}

class FailingEmbedder final : public EmbeddingProvider {
 public:
  std::size_t dim() const override { return 4; }
  std::vector<float> Embed(std::string_view text) const override {
    if (text == "bad") throw std::runtime_error("backend down");
    return {1, 0, 0, 0};
  }
};

TEST(TrigramEmbedderTest, DeterministicAndUnitNorm) {
  TrigramEmbedder embedder;
  EXPECT_EQ(embedder.dim(), 256u);
  for (std::string_view s : {"a golden retriever puppy", "x", "", "Bronte Baths \xC3\xA9t\xC3\xA9"}) {
    auto a = embedder.Embed(s);
    auto b = embedder.Embed(s);
    EXPECT_EQ(a, b);
    EXPECT_NEAR(Norm(a), 1.0, 1e-6) << s;
  }
}

// Bucket indices from the fixture generator's FNV-1a trigram oracle.
TEST(TrigramEmbedderTest, BucketsMatchOracle) {
  TrigramEmbedder embedder;
  auto nonzero = [&](std::string_view text) {
    std::vector<std::size_t> out;
    auto v = embedder.Embed(text);
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] != 0.0f) out.push_back(i);
    }
    return out;
  };
  EXPECT_EQ(nonzero("Anubias"), (std::vector<std::size_t>{12, 36, 38, 48, 105, 138, 170, 191, 205}));
  EXPECT_EQ(nonzero("a b"), (std::vector<std::size_t>{12, 100, 140, 146, 227}));
  EXPECT_NEAR(embedder.Embed("a b")[100], 1.0 / std::sqrt(5.0), 1e-7);
}

TEST(TrigramEmbedderTest, CatAndCtaDiffer) {
  TrigramEmbedder embedder;
  EXPECT_NE(embedder.Embed("cat"), embedder.Embed("cta"));
}

TEST(TrigramEmbedderTest, CaseInsensitiveAscii) {
  TrigramEmbedder embedder;
  EXPECT_EQ(embedder.Embed("Golden Retriever"), embedder.Embed("golden retriever"));
}

TEST(EmbedTextsTest, WrapsProviderFailureWithIndex) {
  FailingEmbedder embedder;
  std::vector<std::string> texts = {"ok", "ok", "bad"};
  EXPECT_ERROR_DETAIL(EmbedTexts(embedder, texts), ErrorCode::kProviderError, 2);
}

TEST(EmbeddingMatrixTest, NormalizesOnAppend) {
  EmbeddingMatrix m(2);
  m.Append(std::vector<float>{3, 4});
  EXPECT_FLOAT_EQ(m.row(0)[0], 0.6f);
  EXPECT_FLOAT_EQ(m.row(0)[1], 0.8f);
  EXPECT_ERROR_CODE(m.Append(std::vector<float>{0, 0}), ErrorCode::kInvalidArgument);
  EXPECT_ERROR_CODE(m.Append(std::vector<float>{1, 0, 0}), ErrorCode::kDimensionMismatch);
}

TEST(KnnTest, Examples) {
  auto corpus = ToMatrix({{1, 0}, {0, 1}}, 2);
  auto hits = KnnOne(std::vector<float>{1, 0}, corpus, 1);
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_EQ(hits[0].index, 0u);
  EXPECT_FLOAT_EQ(hits[0].similarity, 1.0f);

  auto tie = KnnOne(std::vector<float>{0.70710678f, 0.70710678f}, corpus, 2);
  ASSERT_EQ(tie.size(), 2u);
  EXPECT_EQ(tie[0].index, 0u);
  EXPECT_EQ(tie[1].index, 1u);
  EXPECT_EQ(tie[0].similarity, tie[1].similarity);

  EXPECT_EQ(KnnOne(std::vector<float>{1, 0}, corpus, 10).size(), 2u);
  EXPECT_ERROR_CODE(KnnOne(std::vector<float>{1, 0, 0}, corpus, 1), ErrorCode::kDimensionMismatch);
  EXPECT_ERROR_CODE(KnnOne(std::vector<float>{1, 0}, corpus, 0), ErrorCode::kInvalidArgument);
}

TEST(KnnTest, MatchesExhaustiveScan) {
  std::mt19937 rng(21);
  constexpr std::size_t kDim = 32;
  std::vector<std::vector<float>> corpus(200), queries(50);
  for (auto& v : corpus) v = RandomUnit(rng, kDim);
  for (auto& v : queries) v = RandomUnit(rng, kDim);
  auto result = Knn(ToMatrix(queries, kDim), ToMatrix(corpus, kDim), 5);
  ASSERT_EQ(result.size(), 50u);
  for (std::size_t q = 0; q < queries.size(); ++q) {
    auto expected = testing::BruteTopK(queries[q], corpus, 5);
    ASSERT_EQ(result[q].size(), 5u);
    for (std::size_t i = 0; i < 5; ++i) {
      EXPECT_EQ(result[q][i].index, expected[i].index) << "query " << q << " rank " << i;
      EXPECT_NEAR(result[q][i].similarity, expected[i].similarity, 1e-6);
    }
  }
}

TEST(KnnTest, CorpusPermutationInvariant) {
  std::mt19937 rng(22);
  constexpr std::size_t kDim = 16;
  std::vector<std::vector<float>> corpus(60);
  for (auto& v : corpus) v = RandomUnit(rng, kDim);
  auto query = RandomUnit(rng, kDim);
  std::vector<std::size_t> perm(corpus.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::vector<float>> shuffled;
  for (std::size_t p : perm) shuffled.push_back(corpus[p]);

  auto base = KnnOne(query, ToMatrix(corpus, kDim), 7);
  auto moved = KnnOne(query, ToMatrix(shuffled, kDim), 7);
  std::set<std::size_t> a, b;
  for (const auto& n : base) a.insert(n.index);
  for (const auto& n : moved) b.insert(perm[n.index]);
  EXPECT_EQ(a, b);
  for (std::size_t i = 1; i < base.size(); ++i) {
    EXPECT_GE(base[i - 1].similarity, base[i].similarity);
  }
}

TEST(CandidateAssignmentTest, SingleEntity) {
  std::vector<VocabularyRow> rows = {{"golden retriever", ""}};
  auto vocab = EntityVocabulary::FromRows(rows);
  std::vector<CaptionedImage> corpus = {{"i0", "a golden retriever puppy", "r0"}};
  auto out = BuildCandidateAssignments(vocab, corpus, TrigramEmbedder(), 1);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].candidate_entity_id, 0);
  EXPECT_EQ(out[0].image_ref, "r0");
}

TEST(CandidateAssignmentTest, ConflictGoesToHigherSimilarity) {
  std::vector<VocabularyRow> rows = {{"retriever", ""}, {"golden retriever", ""}};
  auto vocab = EntityVocabulary::FromRows(rows);
  std::vector<CaptionedImage> corpus = {{"i0", "golden retriever", ""}};
  auto out = BuildCandidateAssignments(vocab, corpus, TrigramEmbedder(), 1);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].candidate_entity_id, 1);
  EXPECT_NEAR(out[0].similarity, 1.0f, 1e-6f);
}

TEST(CandidateAssignmentTest, EqualSimilarityGoesToLowerEntityId) {
  class ConstantEmbedder final : public EmbeddingProvider {
   public:
    std::size_t dim() const override { return 2; }
    std::vector<float> Embed(std::string_view) const override { return {1, 1}; }
  };
  std::vector<VocabularyRow> rows = {{"b", ""}, {"a", ""}};
  auto vocab = EntityVocabulary::FromRows(rows);
  std::vector<CaptionedImage> corpus = {{"i0", "x", ""}, {"i1", "y", ""}};
  auto out = BuildCandidateAssignments(vocab, corpus, ConstantEmbedder(), 2);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].candidate_entity_id, 0);
  EXPECT_EQ(out[1].candidate_entity_id, 0);
}

TEST(CandidateAssignmentTest, Errors) {
  auto vocab = EntityVocabulary::FromRows(std::vector<VocabularyRow>{{"x", ""}});
  EXPECT_ERROR_CODE(BuildCandidateAssignments(vocab, {}, TrigramEmbedder(), 1),
                    ErrorCode::kEmptyInput);
  std::vector<CaptionedImage> dup = {{"i0", "a", ""}, {"i0", "b", ""}};
  EXPECT_ERROR_CODE(BuildCandidateAssignments(vocab, dup, TrigramEmbedder(), 1),
                    ErrorCode::kInvalidArgument);
  std::vector<CaptionedImage> corpus = {{"i0", "bad", ""}};
  EXPECT_ERROR_CODE(BuildCandidateAssignments(vocab, corpus, FailingEmbedder(), 1),
                    ErrorCode::kProviderError);
}

// 10 entities x 100 captions, k=3, against assignments produced by the
// fixture generator's own exhaustive cosine table.
TEST(CandidateAssignmentTest, MatchesExhaustiveFixture) {
  auto vocab = EntityVocabulary::LoadFile(testing::DataPath("match/vocab.jsonl"));
  auto corpus = LoadCorpus(testing::DataPath("match/corpus.jsonl"));
  ASSERT_EQ(vocab.size(), 10u);
  ASSERT_EQ(corpus.size(), 100u);
  TrigramEmbedder embedder;
  auto out = BuildCandidateAssignments(vocab, corpus, embedder, 3);
  auto expected = ReadJsonLines(testing::DataPath("match/expected_assignments.jsonl"));
  ASSERT_EQ(out.size(), expected.size());
  std::set<std::string> ids;
  for (std::size_t i = 0; i < out.size(); ++i) {
    EXPECT_EQ(out[i].image_id, expected[i]["image_id"].get<std::string>());
    EXPECT_EQ(vocab.name(out[i].candidate_entity_id),
              expected[i]["candidate_entity"].get<std::string>());
    EXPECT_NEAR(out[i].similarity, expected[i]["similarity"].get<double>(), 1e-6);
    EXPECT_TRUE(ids.insert(out[i].image_id).second);
    // Similarity equals the dot product of the two unit vectors.
    auto a = embedder.Embed(vocab.name(out[i].candidate_entity_id));
    auto b = embedder.Embed(out[i].caption);
    double dot = 0.0;
    for (std::size_t d = 0; d < a.size(); ++d) dot += static_cast<double>(a[d]) * b[d];
    EXPECT_NEAR(out[i].similarity, dot, 1e-6);
  }
}

TEST(CandidateAssignmentTest, JsonRoundTrip) {
  auto vocab = EntityVocabulary::FromRows(std::vector<VocabularyRow>{{"grosgrain", ""}});
  CandidateAssignment a{"i9", "a ribbon", "img/9.jpg", 0, 0.5f};
  auto j = AssignmentToJson(a, vocab);
  EXPECT_EQ(j["candidate_entity"], "grosgrain");
  auto back = AssignmentFromJson(j, vocab);
  EXPECT_EQ(back.image_id, "i9");
  EXPECT_EQ(back.image_ref, "img/9.jpg");
  EXPECT_EQ(back.candidate_entity_id, 0);
  EXPECT_FLOAT_EQ(back.similarity, 0.5f);
  j["candidate_entity"] = "velvet";
  EXPECT_ERROR_CODE(AssignmentFromJson(j, vocab), ErrorCode::kUnresolvedEntity);
}

}  // namespace
}  // namespace erkit
