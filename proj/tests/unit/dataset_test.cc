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
#include <random>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "common/error_matchers.h"
#include "common/test_util.h"
#include "erkit/dataset.h"
#include "erkit/io.h"

namespace erkit {
namespace {

RefinedRecord MakeRecord(const std::string& id, const std::string& entity) {
  RefinedRecord r;
  r.image_id = id;
  r.original_caption = "caption " + id;
  r.outcome = VerificationOutcome{Verdict::kValidated, entity, "Rationale for " + entity + ".", {}};
  r.qa_pairs = {QAPair{"What is left?", "a"}, QAPair{"What is right?", "b"},
                QAPair{"What is above?", "c"}};
  return r;
}

std::vector<TrainingExample> Examples(std::size_t n) {
  std::vector<TrainingExample> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(TrainingExample{Task::kQa, "q" + std::to_string(i) + "?", "t\n\"" + std::to_string(i),
                                  "img" + std::to_string(i / 5)});
  }
  return out;
}

TEST(ExpandExamplesTest, FiveExamplesPerRecord) {
  auto ex = ExpandExamples(MakeRecord("i1", "bronte baths"), TaskPrompts{});
  ASSERT_EQ(ex.size(), kExamplesPerRecord);
  ASSERT_EQ(ex.size(), 5u);
  EXPECT_EQ(ex[0].task, Task::kEntity);
  EXPECT_EQ(ex[0].input_text, "what is the main entity in this image?");
  EXPECT_EQ(ex[0].target_text, "bronte baths");
  EXPECT_EQ(ex[1].task, Task::kRationale);
  EXPECT_EQ(ex[1].input_text, "[rationale]");
  EXPECT_EQ(ex[1].target_text, "Rationale for bronte baths.");
  for (std::size_t i = 2; i < 5; ++i) {
    EXPECT_EQ(ex[i].task, Task::kQa);
    EXPECT_EQ(ex[i].input_text.back(), '?');
  }
  EXPECT_EQ(ex[4].target_text, "c");
  for (const auto& e : ex) EXPECT_EQ(e.image_id, "i1");
}

TEST(ExpandExamplesTest, ConfiguredPrompts) {
  TaskPrompts prompts{"name the entity", "<why>"};
  auto ex = ExpandExamples(MakeRecord("i1", "x"), prompts);
  EXPECT_EQ(ex[0].input_text, "name the entity");
  EXPECT_EQ(ex[1].input_text, "<why>");
}

TEST(ExpandExamplesTest, LinearAndOrderPreserving) {
  std::vector<RefinedRecord> records;
  for (int i = 0; i < 7; ++i) records.push_back(MakeRecord("i" + std::to_string(i), "e"));
  auto all = ExpandAll(records, TaskPrompts{});
  ASSERT_EQ(all.size(), 35u);
  for (std::size_t i = 0; i < all.size(); ++i) {
    EXPECT_EQ(all[i].image_id, "i" + std::to_string(i / 5));
  }
}

EmbeddingMatrix Unit2d(const std::vector<double>& cosines) {
  EmbeddingMatrix m(2);
  for (double c : cosines) {
    const auto x = static_cast<float>(c);
    const auto y = static_cast<float>(std::sqrt(1.0 - static_cast<double>(x) * x));
    m.Append(std::vector<float>{x, y});
  }
  return m;
}

TEST(LeakFilterTest, StrictThreshold) {
  EmbeddingMatrix eval(2);
  eval.Append(std::vector<float>{1, 0});
  auto records = Unit2d({0.94, 0.95, 0.96});
  auto r = LeakFilter(records, eval, 0.95);
  EXPECT_EQ(r.kept, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(r.removed, (std::vector<std::size_t>{2}));
  EXPECT_NEAR(r.max_similarity[2], 0.96, 1e-6);
}

TEST(LeakFilterTest, ExactlyAtThresholdIsKept) {
  EmbeddingMatrix eval(2), records(2);
  eval.Append(std::vector<float>{0, 1});
  records.Append(std::vector<float>{0, 1});
  auto r = LeakFilter(records, eval, 1.0);
  EXPECT_EQ(r.max_similarity[0], 1.0f);
  EXPECT_EQ(r.kept.size(), 1u);
}

TEST(LeakFilterTest, EmptyEvalSetKeepsEverything) {
  auto records = Unit2d({0.1, 0.99});
  auto r = LeakFilter(records, EmbeddingMatrix(2), 0.0);
  EXPECT_EQ(r.kept.size(), 2u);
  EXPECT_TRUE(r.removed.empty());
}

TEST(LeakFilterTest, Errors) {
  auto records = Unit2d({0.5});
  EmbeddingMatrix eval3(3);
  eval3.Append(std::vector<float>{1, 0, 0});
  EXPECT_ERROR_CODE(LeakFilter(records, eval3, 0.95), ErrorCode::kDimensionMismatch);
  EXPECT_ERROR_CODE(LeakFilter(records, Unit2d({1.0}), 1.5), ErrorCode::kInvalidArgument);
  EXPECT_ERROR_CODE(LeakFilter(records, Unit2d({1.0}), -0.1), ErrorCode::kInvalidArgument);
}

TEST(LeakFilterTest, PartitionAndMonotonicity) {
  std::mt19937 rng(5);
  std::normal_distribution<float> g;
  EmbeddingMatrix records(8), eval(8);
  for (int i = 0; i < 200; ++i) {
    std::vector<float> v(8);
    for (auto& x : v) x = g(rng);
    records.Append(v);
  }
  for (int i = 0; i < 5; ++i) {
    std::vector<float> v(8);
    for (auto& x : v) x = g(rng);
    eval.Append(v);
  }
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> thresholds(50);
  for (auto& t : thresholds) t = u(rng);
  std::sort(thresholds.begin(), thresholds.end());
  std::size_t last_removed = records.rows() + 1;
  for (double t : thresholds) {
    auto r = LeakFilter(records, eval, t);
    std::set<std::size_t> all(r.kept.begin(), r.kept.end());
    for (auto i : r.removed) EXPECT_TRUE(all.insert(i).second);
    EXPECT_EQ(all.size(), records.rows());
    EXPECT_LE(r.removed.size(), last_removed);
    last_removed = r.removed.size();
  }
}

TEST(PartitionByLeakTest, SplitsItems) {
  LeakFilterResult r{{0, 2}, {1}, {}};
  std::vector<std::string> items = {"a", "b", "c"};
  auto [kept, removed] = PartitionByLeak<std::string>(items, r);
  EXPECT_EQ(kept, (std::vector<std::string>{"a", "c"}));
  EXPECT_EQ(removed, (std::vector<std::string>{"b"}));
}

TEST(SplitSeenUnseenTest, RationaleFollowsEntity) {
  std::vector<RefinedRecord> records = {MakeRecord("i0", "Bronte Baths"), MakeRecord("i1", "anubias")};
  records[1].qa_pairs[0].answer = "bronte baths";
  auto ex = ExpandAll(records, TaskPrompts{});
  auto [seen, unseen] = SplitSeenUnseen(ex, {"bronte baths"});
  // i0: entity + rationale seen, its three QA answers unseen. i1: one QA seen.
  ASSERT_EQ(seen.size(), 3u);
  EXPECT_EQ(seen[0].task, Task::kEntity);
  EXPECT_EQ(seen[1].task, Task::kRationale);
  EXPECT_EQ(seen[1].image_id, "i0");
  EXPECT_EQ(seen[2].image_id, "i1");
  EXPECT_EQ(unseen.size(), 7u);

  auto [none, everything] = SplitSeenUnseen(ex, {});
  EXPECT_TRUE(none.empty());
  EXPECT_EQ(everything.size(), ex.size());
}

TEST(ShardsTest, SizesAndRoundTrip) {
  testing::TempDir dir;
  auto examples = Examples(10);
  auto manifest = WriteShards(examples, 4, dir.path(), "cfg-hash");
  ASSERT_EQ(manifest.shards.size(), 3u);
  EXPECT_EQ(manifest.shards[0].count, 4u);
  EXPECT_EQ(manifest.shards[1].count, 4u);
  EXPECT_EQ(manifest.shards[2].count, 2u);
  EXPECT_EQ(manifest.config_hash, "cfg-hash");
  for (const auto& s : manifest.shards) {
    EXPECT_EQ(Sha256Hex(testing::Slurp(dir / s.path)), s.sha256);
    EXPECT_EQ(SplitLines(testing::Slurp(dir / s.path)).size(), s.count);
  }
  auto back = ReadShards(dir / "shard.manifest.json");
  EXPECT_EQ(back, examples);

  auto j = ParseJsonLines(testing::Slurp(dir / manifest.shards[0].path), "s")[0];
  EXPECT_EQ(ToJsonLine(j), R"({"task":"qa","input":"q0?","target":"t\n\"0","image_id":"img0"})");
}

TEST(ShardsTest, Deterministic) {
  testing::TempDir a, b;
  auto examples = Examples(9);
  WriteShards(examples, 2, a.path(), "h");
  WriteShards(examples, 2, b.path(), "h");
  EXPECT_EQ(testing::Slurp(a / "shard.manifest.json"), testing::Slurp(b / "shard.manifest.json"));
}

TEST(ShardsTest, TamperDetected) {
  testing::TempDir dir;
  auto manifest = WriteShards(Examples(10), 4, dir.path(), "h");
  const auto shard = dir / manifest.shards[1].path;
  std::string content = testing::Slurp(shard);
  content[content.find("q5")] = 'Q';
  testing::Spit(shard, content);
  EXPECT_ERROR_CODE(ReadShards(dir / "shard.manifest.json"), ErrorCode::kManifestMismatch);
}

TEST(ShardsTest, CountMismatchDetected) {
  testing::TempDir dir;
  auto manifest = WriteShards(Examples(3), 4, dir.path(), "h");
  manifest.shards[0].count = 2;
  testing::Spit(dir / "shard.manifest.json", ManifestToJson(manifest).dump(2));
  EXPECT_ERROR_CODE(ReadShards(dir / "shard.manifest.json"), ErrorCode::kManifestMismatch);
}

TEST(ShardsTest, Errors) {
  testing::TempDir dir;
  EXPECT_ERROR_CODE(WriteShards(Examples(3), 0, dir.path(), "h"), ErrorCode::kInvalidArgument);
  EXPECT_ERROR_CODE(ReadShards(dir / "absent.manifest.json"), ErrorCode::kIoError);
  testing::Spit(dir / "bad.manifest.json", "{not json");
  EXPECT_ERROR_CODE(ReadShards(dir / "bad.manifest.json"), ErrorCode::kParseError);
}

TEST(ShardsTest, EmptyInputWritesEmptyManifest) {
  testing::TempDir dir;
  auto manifest = WriteShards({}, 4, dir.path(), "h");
  EXPECT_TRUE(manifest.shards.empty());
  EXPECT_TRUE(ReadShards(dir / "shard.manifest.json").empty());
}

}  // namespace
}  // namespace erkit
