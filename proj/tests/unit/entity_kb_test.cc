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

#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "common/error_matchers.h"
#include "common/test_util.h"
#include "erkit/entity_kb.h"

namespace erkit {
namespace {

TEST(NormalizeNameTest, Examples) {
  EXPECT_EQ(NormalizeName("  Boeing 707 "), "boeing 707");
  EXPECT_EQ(NormalizeName("nematocampa resistaria"), "nematocampa resistaria");
  EXPECT_EQ(NormalizeName("Dahlia 'Bishop of Llandaff'"), "dahlia 'bishop of llandaff'");
  EXPECT_EQ(NormalizeName(""), "");
  EXPECT_EQ(NormalizeName(" \t\n "), "");
}

TEST(NormalizeNameTest, CollapsesUnicodeWhitespace) {
  EXPECT_EQ(NormalizeName("bronte\t\t baths"), "bronte baths");
  EXPECT_EQ(NormalizeName("bronte\xC2\xA0" "baths"), "bronte baths");        // no-break space
  EXPECT_EQ(NormalizeName("\xE3\x80\x80" "Bronte  Baths"), "bronte baths");  // ideographic space
}

TEST(NormalizeNameTest, ComposesAndLowercasesNonAscii) {
  // "E" + combining acute -> precomposed lowercase e-acute.
  EXPECT_EQ(NormalizeName("Caf" "E\xCC\x81"), "caf\xC3\xA9");
  EXPECT_EQ(NormalizeName("CAF\xC3\x89"), "caf\xC3\xA9");
  EXPECT_EQ(NormalizeName("\xC3\x85land"), "\xC3\xA5land");
}

TEST(NormalizeNameTest, IdempotentOnRandomInput) {
  const std::vector<std::string> atoms = {"a",    "Z",        " ",        "\t",        "\n",
                                          "\xC3\x89", "E\xCC\x81", "\xC2\xA0", "\xCE\xA3", "\xE2\x80\x83",
                                          "'",    "-",        "7",        "\xE6\x97\xA5", "\xC3\x9F"};
  std::mt19937 rng(3);
  std::uniform_int_distribution<std::size_t> pick(0, atoms.size() - 1);
  std::uniform_int_distribution<int> len(0, 12);
  for (int trial = 0; trial < 2000; ++trial) {
    std::string s;
    for (int i = len(rng); i > 0; --i) s += atoms[pick(rng)];
    const std::string once = NormalizeName(s);
    EXPECT_EQ(NormalizeName(once), once) << "input: " << s;
    EXPECT_EQ(once.find("  "), std::string::npos);
    if (!once.empty()) {
      EXPECT_NE(once.front(), ' ');
      EXPECT_NE(once.back(), ' ');
    }
  }
}

TEST(EntityVocabularyTest, AssignsPositionalIds) {
  std::vector<VocabularyRow> rows = {{"Grosgrain", "ribbon"}, {"Bronte Baths", ""}, {"anubias", "plant"}};
  auto vocab = EntityVocabulary::FromRows(rows);
  ASSERT_EQ(vocab.size(), 3u);
  EXPECT_EQ(vocab.index_size(), 3u);
  for (EntityId id = 0; id < 3; ++id) {
    EXPECT_EQ(vocab.record(id).id, id);
    EXPECT_EQ(vocab.Lookup(vocab.record(id).canonical_name), id);
  }
  EXPECT_EQ(vocab.name(1), "bronte baths");
  EXPECT_EQ(vocab.record(2).summary, "plant");
}

TEST(EntityVocabularyTest, DuplicateAfterNormalization) {
  std::vector<VocabularyRow> rows = {{"A", ""}, {"a", ""}};
  try {
    EntityVocabulary::FromRows(rows);
    FAIL() << "expected DuplicateName";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDuplicateName);
    EXPECT_NE(std::string(e.what()).find("\"a\""), std::string::npos) << e.what();
  }
}

TEST(EntityVocabularyTest, EmptyNameReportsRow) {
  std::vector<VocabularyRow> rows = {{"x", ""}, {"  ", ""}};
  EXPECT_ERROR_DETAIL(EntityVocabulary::FromRows(rows), ErrorCode::kEmptyName, 1);
}

TEST(EntityVocabularyTest, EmptyStream) {
  auto vocab = EntityVocabulary::FromRows({});
  EXPECT_EQ(vocab.size(), 0u);
  EXPECT_TRUE(vocab.empty());
  EXPECT_FALSE(vocab.Lookup("anything").has_value());
}

TEST(EntityVocabularyTest, LookupNormalizes) {
  std::vector<VocabularyRow> rows = {{"golden retriever", ""}, {"Boeing 707", ""}};
  auto vocab = EntityVocabulary::FromRows(rows);
  EXPECT_EQ(vocab.Lookup("  Golden   RETRIEVER "), 0);
  EXPECT_EQ(vocab.Lookup("boeing 707"), 1);
  EXPECT_FALSE(vocab.Lookup("boeing 747").has_value());
  EXPECT_EQ(vocab.LookupCanonical("boeing 707"), 1);
  EXPECT_FALSE(vocab.LookupCanonical("Boeing 707").has_value());
}

TEST(EntityVocabularyTest, RecordOutOfRange) {
  auto vocab = EntityVocabulary::FromRows({});
  EXPECT_ERROR_CODE(vocab.record(0), ErrorCode::kIndexOutOfRange);
}

TEST(EntityVocabularyTest, ParsesJsonLinesAndTsv) {
  auto jsonl = EntityVocabulary::ParseRows(
      "{\"name\": \"Grosgrain\", \"summary\": \"a ribbon\"}\n\n{\"name\": \"anubias\"}\n");
  ASSERT_EQ(jsonl.size(), 2u);
  EXPECT_EQ(jsonl[0].name, "Grosgrain");
  EXPECT_EQ(jsonl[0].summary, "a ribbon");
  EXPECT_EQ(jsonl[1].summary, "");

  auto tsv = EntityVocabulary::ParseRows("grosgrain\ta ribbon\r\nanubias\n");
  ASSERT_EQ(tsv.size(), 2u);
  EXPECT_EQ(tsv[0].summary, "a ribbon");
  EXPECT_EQ(tsv[1].name, "anubias");
}

TEST(EntityVocabularyTest, RejectsMalformedJson) {
  EXPECT_ERROR_CODE(EntityVocabulary::ParseRows("{\"name\": \n"), ErrorCode::kParseError);
  EXPECT_ERROR_CODE(EntityVocabulary::ParseRows("{\"summary\": \"no name\"}\n"),
                    ErrorCode::kParseError);
}

TEST(EntityVocabularyTest, LoadFile) {
  auto vocab = EntityVocabulary::LoadFile(testing::DataPath("e2e/vocab.jsonl"));
  EXPECT_EQ(vocab.size(), 10u);
  EXPECT_EQ(vocab.Lookup("Dahlia 'Bishop of Llandaff'"), vocab.LookupCanonical("dahlia 'bishop of llandaff'"));
  EXPECT_ERROR_CODE(EntityVocabulary::LoadFile("/nonexistent/vocab.jsonl"), ErrorCode::kIoError);
}

}  // namespace
}  // namespace erkit
