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

#include <string>

#include <gtest/gtest.h>

#include "common/error_matchers.h"
#include "common/parser_cases.h"
#include "erkit/entity_kb.h"
#include "erkit/llm_refinement.h"

namespace erkit {
namespace {

TEST(ParserCasesTest, AllCannedResponses) {
  auto cases = testing::LoadParserCases();
  ASSERT_EQ(cases.size(), 12u);
  for (const auto& c : cases) {
    auto r = testing::RunParserCase(c);
    EXPECT_TRUE(r.pass) << r.name << ": " << r.message;
  }
}

TEST(VerificationParserTest, ValidatedKeepsCandidateName) {
  auto o = ParseVerificationResponse("yes: the ribbon is ribbed", "grosgrain");
  EXPECT_EQ(o.verdict, Verdict::kValidated);
  EXPECT_EQ(o.entity_name, "grosgrain");
  EXPECT_EQ(o.rationale, "the ribbon is ribbed");
}

TEST(VerificationParserTest, VerdictMustBeAWholeWord) {
  EXPECT_ERROR_CODE(ParseVerificationResponse("Yesterday it rained.", "x"),
                    ErrorCode::kMissingVerdict);
  EXPECT_ERROR_CODE(ParseVerificationResponse("Nothing to see.", "x"),
                    ErrorCode::kMissingVerdict);
  EXPECT_ERROR_CODE(ParseVerificationResponse("", "x"), ErrorCode::kMissingVerdict);
}

TEST(VerificationParserTest, QuotedOrBoldVerdict) {
  EXPECT_EQ(ParseVerificationResponse("**YES** ribs are visible.", "g").verdict,
            Verdict::kValidated);
  EXPECT_EQ(ParseVerificationResponse("'NO' @anubias@ broad leaves.", "g").entity_name,
            "anubias");
}

TEST(VerificationParserTest, FirstSpanWins) {
  auto o = ParseVerificationResponse("NO @bronte baths@ not @bondi icebergs@ either.", "pool");
  EXPECT_EQ(o.entity_name, "bronte baths");
  EXPECT_EQ(o.rationale, "not @bondi icebergs@ either.");
}

TEST(VerificationParserTest, YesWithExtraSpanIsAccepted) {
  auto o = ParseVerificationResponse("YES @grosgrain@ the ribs are visible.", "grosgrain");
  EXPECT_EQ(o.verdict, Verdict::kValidated);
  EXPECT_EQ(o.entity_name, "grosgrain");
}

TEST(VerificationParserTest, EmptySpanIsMissingCorrection) {
  EXPECT_ERROR_CODE(ParseVerificationResponse("NO @ @ rock pool.", "x"),
                    ErrorCode::kMissingCorrection);
  EXPECT_ERROR_CODE(ParseVerificationResponse("NO @unterminated rock pool.", "x"),
                    ErrorCode::kMissingCorrection);
}

TEST(VerificationParserTest, NoWithoutRationale) {
  EXPECT_ERROR_CODE(ParseVerificationResponse("NO @bronte baths@", "x"),
                    ErrorCode::kEmptyRationale);
}

TEST(VerificationParserTest, LongRationaleWarnsButParses) {
  auto o = ParseVerificationResponse("YES One. Two. Three.", "g");
  EXPECT_EQ(o.rationale, "One. Two. Three.");
  ASSERT_EQ(o.warnings.size(), 1u);
  auto two = ParseVerificationResponse("YES One sentence. Another one", "g");
  EXPECT_TRUE(two.warnings.empty());
}

TEST(QaParserTest, AppendsQuestionMark) {
  auto pairs = ParseQaResponse("Q: Name the fish A: Emperor tetra Q: Color? A: Blue Q: Plant? A: Anubias");
  EXPECT_EQ(pairs[0].question, "Name the fish?");
  EXPECT_EQ(pairs[0].answer, "Emperor tetra");
}

TEST(QaParserTest, MarkersInsideWordsAreText) {
  auto pairs = ParseQaResponse(
      "Q: Which FAQ: page? A: The FAQ:list Q: B? A: b Q: C? A: c");
  EXPECT_EQ(pairs[0].question, "Which FAQ: page?");
  EXPECT_EQ(pairs[0].answer, "The FAQ:list");
}

TEST(QaParserTest, ForbiddenQuestionVariants) {
  EXPECT_ERROR_DETAIL(
      ParseQaResponse("Q: what is the main object in the image A: x Q: B? A: b Q: C? A: c"),
      ErrorCode::kForbiddenQuestion, 0);
  EXPECT_ERROR_DETAIL(
      ParseQaResponse("Q: A? A: a Q: B? A: b Q: WHAT IS THE MAIN OBJECT IN THE IMAGE? A: c"),
      ErrorCode::kForbiddenQuestion, 2);
}

TEST(QaParserTest, ForbiddenQuestionBeyondThirdPairIgnored) {
  auto pairs = ParseQaResponse(
      "Q: A? A: a Q: B? A: b Q: C? A: c Q: What is the main object in the image? A: d");
  EXPECT_EQ(pairs[2].answer, "c");
}

TEST(QaParserTest, QuestionWithoutAnswerCountsAsPair) {
  EXPECT_ERROR_DETAIL(ParseQaResponse("Q: A? Q: B? A: b Q: C? A: c"), ErrorCode::kEmptyField, 0);
}

TEST(QaParserTest, NoPairs) {
  EXPECT_ERROR_DETAIL(ParseQaResponse("no questions here"), ErrorCode::kTooFewPairs, 0);
}

}  // namespace
}  // namespace erkit
